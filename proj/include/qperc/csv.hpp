#pragma once

#include <cstdio>
#include <string>

namespace qperc {

// Shortest decimal form that round-trips the double; C locale, '.' separator.
inline std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  double back = 0.0;
  std::sscanf(buf, "%lg", &back);
  if (back != x) return buf;
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, x);
    std::sscanf(probe, "%lg", &back);
    if (back == x) return probe;
  }
  return buf;
}

inline constexpr const char* kCurveCsvHeader = "x,p_hat,stderr,trials\n";

inline void append_csv_row(std::string& out, const std::string& x,
                           double p_hat, double std_error, long trials) {
  out += x;
  out += ',';
  out += format_full(p_hat);
  out += ',';
  out += format_full(std_error);
  out += ',';
  out += std::to_string(trials);
  out += '\n';
}

}  // namespace qperc
