#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qperc/percolation.hpp"

namespace qperc {

// Bond percolation thresholds of the supported 2D lattices.
double lattice_threshold(LatticeKind kind);

struct McOptions {
  long trials = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

// Outcome of one strategy run: named Monte Carlo estimates next to their
// closed-form counterparts whenever one exists, plus an optional
// distance-connectivity curve.
struct ProtocolReport {
  std::string strategy;
  long trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::pair<std::string, McEstimate>> estimates;
  std::vector<std::pair<std::string, double>> exact;
  ConnectivityCurve curve;

  double param(const std::string& name) const;
  const McEstimate& estimate(const std::string& name) const;
  bool has_exact(const std::string& name) const;
  double exact_value(const std::string& name) const;

  std::string to_json() const;
  std::string to_csv() const;  // strategy,x,p_hat,stderr,trials rows
};

inline constexpr const char* kReportCsvHeader = "strategy,x,p_hat,stderr,trials\n";

// Open probability of each edge under classical entanglement percolation:
// the singlet conversion probability of the tensor of all copies it carries.
std::vector<double> cep_edge_probabilities(const Network& net);

// Classical entanglement percolation between two nodes: every bond converts
// to a singlet independently, connectivity is checked on the open graph.
// Chains get the exact product closed form next to the estimate.
ProtocolReport cep(const Network& net, NodeId a, NodeId b, const McOptions& opts);

// Entanglement swapping along a chain of `repeaters` intermediate nodes whose
// N+1 bonds all equal `bond` (higher-dimensional bonds are first reduced to
// their two-qubit equivalent). Samples the Bell-measurement outcome chain and
// reports the end-to-end singlet conversion probability and concurrence.
ProtocolReport chain_swap(int repeaters, const SchmidtVector& bond,
                          const McOptions& opts);

// The 2x2 square with target nodes on the main diagonal: classical
// entanglement percolation versus two independent one-repeater swap chains.
ProtocolReport square2x2(const SchmidtVector& bond, const McOptions& opts);

struct HoneycombDemoReport {
  ProtocolReport cep_strategy;   // doubled bonds, direct conversion
  ProtocolReport swap_strategy;  // swap to triangular lattice, then convert
  double honeycomb_p_th = 0.0;
  double triangular_p_th = 0.0;

  std::string to_json() const;
  std::string to_csv() const;
};

// Runs both strategies on the same periodic honeycomb network whose edges
// carry two copies of (lambda1, 1-lambda1) each, reporting per-edge open
// probabilities, spanning frequencies, and two-point connectivity curves.
HoneycombDemoReport honeycomb_demo(double lambda1, int length,
                                   const McOptions& opts,
                                   std::vector<int> distances = {});

}  // namespace qperc
