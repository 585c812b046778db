#pragma once

#include <vector>

#include "qperc/rng.hpp"
#include "qperc/schmidt.hpp"

namespace qperc::test {

inline SchmidtVector random_qubit(Rng& rng) {
  return SchmidtVector::qubit(0.5 + 0.5 * rng.uniform());
}

inline bool approx_equal(const SchmidtVector& a, const SchmidtVector& b,
                         double tol = 1e-12) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i) {
    if (std::abs(a.lambda(i) - b.lambda(i)) > tol) return false;
  }
  return true;
}

inline SchmidtVector random_state(Rng& rng, int dim) {
  std::vector<double> coeffs(static_cast<std::size_t>(dim));
  double sum = 0.0;
  for (double& c : coeffs) {
    c = rng.uniform() + 1e-6;
    sum += c;
  }
  for (double& c : coeffs) c /= sum;
  std::sort(coeffs.begin(), coeffs.end(), std::greater<double>());
  return SchmidtVector(coeffs);
}

}  // namespace qperc::test
