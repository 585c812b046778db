#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qperc/lattice.hpp"
#include "qperc/rng.hpp"

namespace qperc {

// Disjoint sets over node ids with union by size and path compression.
// unite() optionally records the displacement between the two nodes' unit
// cells; a union that closes a loop with a nonzero net displacement marks the
// component as winding the torus along the offending axes.
class UnionFind {
 public:
  explicit UnionFind(int n);

  int find(int x);
  // pos(b) = pos(a) + (dx, dy). Returns true if the sets were merged, false
  // if a and b were already connected.
  bool unite(int a, int b, int dx = 0, int dy = 0);
  bool connected(int a, int b) { return find(a) == find(b); }

  int size() const { return static_cast<int>(parent_.size()); }
  int component_size(int x) { return size_[static_cast<std::size_t>(find(x))]; }
  int component_count() const { return components_; }
  int largest_component_size() const { return largest_; }
  bool wraps(int axis) const { return wrap_[axis]; }

 private:
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> size_;
  std::vector<std::int32_t> offx_, offy_;
  int components_;
  int largest_ = 1;
  bool wrap_[2] = {false, false};
};

// One realized bond configuration: the per-edge uniforms that generated it,
// the open set (open[e] == weights[e] < p[e]), and its cluster structure.
struct PercolationSample {
  std::vector<double> weights;
  std::vector<std::uint8_t> open;
  UnionFind clusters;
};

// Per-edge uniforms for a trial, derived statelessly from (seed, trial, edge).
std::vector<double> bond_weights(std::size_t edge_count, std::uint64_t seed,
                                 std::uint64_t trial);

// Thresholds the given weights at a common or per-edge open probability and
// builds the cluster structure. Keeping weights fixed while varying p yields
// coupled, monotone configurations.
PercolationSample realize(const Network& net, std::vector<double> weights,
                          double p);
PercolationSample realize(const Network& net, std::vector<double> weights,
                          std::span<const double> p_edge);

PercolationSample sample(const Network& net, double p, Rng& rng);
PercolationSample sample(const Network& net, std::span<const double> p_edge,
                         Rng& rng);

bool connected(PercolationSample& s, NodeId a, NodeId b);

enum class Axis : int { x = 0, y = 1 };

// Periodic networks: true iff some cluster winds the torus along the axis.
// Open networks: true iff some cluster touches both opposite faces.
bool spans(const Network& net, PercolationSample& s, Axis axis);

struct ThetaEstimate {
  double theta = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

// Mean largest-cluster fraction over independent trials: the finite-size
// stand-in for the percolation probability.
ThetaEstimate estimate_theta(const Network& net, double p, long trials,
                             std::uint64_t seed, int threads = 1);

struct ThresholdEstimate {
  double p_th_hat = 0.0;
  double std_error = 0.0;
  int length = 0;
  long trials = 0;

  std::string to_json() const;
  // one x,p_hat,stderr,trials row labelled by the lattice kind
  std::string to_csv_row(const std::string& label) const;
};

// Bisects the open probability until the x-axis spanning frequency crosses
// one half, at resolution tol (>= 0.005). Weights are coupled across
// bisection points, so the empirical spanning frequency is monotone in p.
ThresholdEstimate estimate_threshold(LatticeKind kind, int length,
                                     long trials_per_point, double tol,
                                     std::uint64_t seed, int threads = 1);

struct CurvePoint {
  double x = 0.0;
  double p_hat = 0.0;
  double std_error = 0.0;
  long trials = 0;
};

struct ConnectivityCurve {
  std::vector<CurvePoint> points;

  std::string to_csv() const;
  std::string to_json() const;
};

// Empirical pair-connectivity per graph distance. Pairs are bucketed by their
// distance in the full network; unreachable pairs are dropped.
ConnectivityCurve two_point(const Network& net, double p,
                            const std::vector<std::pair<NodeId, NodeId>>& pairs,
                            long trials, std::uint64_t seed, int threads = 1);
ConnectivityCurve two_point(const Network& net, std::span<const double> p_edge,
                            const std::vector<std::pair<NodeId, NodeId>>& pairs,
                            long trials, std::uint64_t seed, int threads = 1);

// Node pairs separated by `distance` unit cells along the x direction, one
// per row (A sublattice on honeycomb). Requires a lattice network.
std::vector<std::pair<NodeId, NodeId>> pairs_at_distance(const Network& net,
                                                         int distance);

}  // namespace qperc
