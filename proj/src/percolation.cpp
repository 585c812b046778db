#include "qperc/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "qperc/csv.hpp"
#include "qperc/parallel.hpp"

namespace qperc {

UnionFind::UnionFind(int n)
    : parent_(static_cast<std::size_t>(n)),
      size_(static_cast<std::size_t>(n), 1),
      offx_(static_cast<std::size_t>(n), 0),
      offy_(static_cast<std::size_t>(n), 0),
      components_(n) {
  if (n < 1) throw ValidationError("union-find needs at least one element");
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  const int p = parent_[static_cast<std::size_t>(x)];
  if (p == x) return x;
  const int root = find(p);
  // after the recursive call, p's offset is relative to the root
  offx_[static_cast<std::size_t>(x)] += offx_[static_cast<std::size_t>(p)];
  offy_[static_cast<std::size_t>(x)] += offy_[static_cast<std::size_t>(p)];
  parent_[static_cast<std::size_t>(x)] = root;
  return root;
}

bool UnionFind::unite(int a, int b, int dx, int dy) {
  int ra = find(a);
  int rb = find(b);
  if (ra == rb) {
    // Redundant bond: a closed loop. If its net displacement is nonzero the
    // component winds the torus along that axis.
    const int wx = offx_[static_cast<std::size_t>(a)] + dx - offx_[static_cast<std::size_t>(b)];
    const int wy = offy_[static_cast<std::size_t>(a)] + dy - offy_[static_cast<std::size_t>(b)];
    if (wx != 0) wrap_[0] = true;
    if (wy != 0) wrap_[1] = true;
    return false;
  }
  // offset of the new child root relative to the new parent root, from
  // pos(b) = pos(a) + d
  int cx = offx_[static_cast<std::size_t>(a)] + dx - offx_[static_cast<std::size_t>(b)];
  int cy = offy_[static_cast<std::size_t>(a)] + dy - offy_[static_cast<std::size_t>(b)];
  if (size_[static_cast<std::size_t>(ra)] < size_[static_cast<std::size_t>(rb)]) {
    std::swap(ra, rb);
    cx = -cx;
    cy = -cy;
  }
  parent_[static_cast<std::size_t>(rb)] = ra;
  offx_[static_cast<std::size_t>(rb)] = cx;
  offy_[static_cast<std::size_t>(rb)] = cy;
  size_[static_cast<std::size_t>(ra)] += size_[static_cast<std::size_t>(rb)];
  largest_ = std::max(largest_, size_[static_cast<std::size_t>(ra)]);
  --components_;
  return true;
}

std::vector<double> bond_weights(std::size_t edge_count, std::uint64_t seed,
                                 std::uint64_t trial) {
  std::vector<double> w(edge_count);
  for (std::size_t e = 0; e < edge_count; ++e) {
    w[e] = keyed_uniform(seed, trial, static_cast<std::uint64_t>(e));
  }
  return w;
}

namespace {

PercolationSample realize_impl(const Network& net, std::vector<double> weights,
                               const double* p_scalar,
                               std::span<const double> p_edge) {
  const std::size_t n_edges = net.edges().size();
  if (weights.size() != n_edges) {
    throw ValidationError("weight list does not match edge count");
  }
  if (!p_scalar && p_edge.size() != n_edges) {
    throw ValidationError("probability list does not match edge count");
  }
  auto prob = [&](std::size_t e) { return p_scalar ? *p_scalar : p_edge[e]; };
  auto check = [](double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("open probability must lie in [0,1]");
    }
  };
  if (p_scalar) {
    check(*p_scalar);
  } else {
    for (double p : p_edge) check(p);
  }

  PercolationSample s{std::move(weights),
                      std::vector<std::uint8_t>(n_edges, 0),
                      UnionFind(net.node_count())};
  for (std::size_t e = 0; e < n_edges; ++e) {
    if (s.weights[e] < prob(e)) {
      s.open[e] = 1;
      const Edge& edge = net.edges()[e];
      s.clusters.unite(edge.u, edge.v, edge.shift[0], edge.shift[1]);
    }
  }
  return s;
}

}  // namespace

PercolationSample realize(const Network& net, std::vector<double> weights,
                          double p) {
  return realize_impl(net, std::move(weights), &p, {});
}

PercolationSample realize(const Network& net, std::vector<double> weights,
                          std::span<const double> p_edge) {
  return realize_impl(net, std::move(weights), nullptr, p_edge);
}

PercolationSample sample(const Network& net, double p, Rng& rng) {
  std::vector<double> w(net.edges().size());
  for (double& x : w) x = rng.uniform();
  return realize(net, std::move(w), p);
}

PercolationSample sample(const Network& net, std::span<const double> p_edge,
                         Rng& rng) {
  std::vector<double> w(net.edges().size());
  for (double& x : w) x = rng.uniform();
  return realize(net, std::move(w), p_edge);
}

bool connected(PercolationSample& s, NodeId a, NodeId b) {
  return s.clusters.connected(a, b);
}

bool spans(const Network& net, PercolationSample& s, Axis axis) {
  if (!net.has_coords()) {
    throw ValidationError("spanning is defined for lattice networks only");
  }
  const int ax = static_cast<int>(axis);
  if (net.spec().boundary == Boundary::periodic) {
    return s.clusters.wraps(ax);
  }
  // open boundary: a cluster touching both opposite faces
  int lo = net.cell(0)[static_cast<std::size_t>(ax)];
  int hi = lo;
  for (NodeId n = 1; n < net.node_count(); ++n) {
    lo = std::min(lo, net.cell(n)[static_cast<std::size_t>(ax)]);
    hi = std::max(hi, net.cell(n)[static_cast<std::size_t>(ax)]);
  }
  if (lo == hi) return false;
  std::vector<std::uint8_t> lo_roots(static_cast<std::size_t>(net.node_count()), 0);
  for (NodeId n = 0; n < net.node_count(); ++n) {
    if (net.cell(n)[static_cast<std::size_t>(ax)] == lo) {
      lo_roots[static_cast<std::size_t>(s.clusters.find(n))] = 1;
    }
  }
  for (NodeId n = 0; n < net.node_count(); ++n) {
    if (net.cell(n)[static_cast<std::size_t>(ax)] == hi &&
        lo_roots[static_cast<std::size_t>(s.clusters.find(n))]) {
      return true;
    }
  }
  return false;
}

namespace {

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double binomial_stderr(double p_hat, double n_obs) {
  return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / n_obs);
}

}  // namespace

ThetaEstimate estimate_theta(const Network& net, double p, long trials,
                             std::uint64_t seed, int threads) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  std::vector<double> fractions(static_cast<std::size_t>(trials), 0.0);
  const double n_nodes = net.node_count();
  for_each_trial(trials, threads, [&](long t) {
    PercolationSample s = realize(
        net, bond_weights(net.edges().size(), seed, static_cast<std::uint64_t>(t)), p);
    fractions[static_cast<std::size_t>(t)] =
        s.clusters.largest_component_size() / n_nodes;
  });
  auto [mean, se] = mean_stderr(fractions);
  return ThetaEstimate{mean, se, trials};
}

namespace {

// Fraction of trials whose realized configuration spans along x.
double spanning_frequency(const Network& net, double p, long trials,
                          std::uint64_t seed, int threads) {
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(trials), 0);
  for_each_trial(trials, threads, [&](long t) {
    PercolationSample s = realize(
        net, bond_weights(net.edges().size(), seed, static_cast<std::uint64_t>(t)), p);
    hits[static_cast<std::size_t>(t)] = spans(net, s, Axis::x) ? 1 : 0;
  });
  long count = 0;
  for (std::uint8_t h : hits) count += h;
  return static_cast<double>(count) / static_cast<double>(trials);
}

}  // namespace

ThresholdEstimate estimate_threshold(LatticeKind kind, int length,
                                     long trials_per_point, double tol,
                                     std::uint64_t seed, int threads) {
  if (kind != LatticeKind::square && kind != LatticeKind::triangular &&
      kind != LatticeKind::honeycomb) {
    throw ValidationError("threshold estimation needs a 2D lattice kind");
  }
  if (tol < 0.005) throw ValidationError("tol must be >= 0.005");
  if (trials_per_point < 1) throw ValidationError("trials must be >= 1");

  const Network net = build_lattice(
      LatticeSpec{kind, length, Boundary::periodic}, SchmidtVector::bell(), 1);

  double lo = 0.0, hi = 1.0;
  double f_lo = 0.0, f_hi = 1.0;   // spanning frequency at the bracket ends
  double p_lo = 0.0, p_hi = 1.0;   // where those frequencies were measured
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double freq = spanning_frequency(net, mid, trials_per_point, seed, threads);
    if (freq < 0.5) {
      lo = mid;
      f_lo = freq;
      p_lo = mid;
    } else {
      hi = mid;
      f_hi = freq;
      p_hi = mid;
    }
  }

  // statistical error of the crossing: binomial noise over the local slope,
  // plus the bisection resolution
  double slope = (p_hi > p_lo && f_hi > f_lo) ? (f_hi - f_lo) / (p_hi - p_lo) : 0.0;
  const double freq_noise = 0.5 / std::sqrt(static_cast<double>(trials_per_point));
  double se = 0.5 * tol;
  if (slope > 0.0) se += freq_noise / slope;
  return ThresholdEstimate{0.5 * (lo + hi), se, length, trials_per_point};
}

std::string ThresholdEstimate::to_json() const {
  nlohmann::json doc;
  doc["p_th_hat"] = p_th_hat;
  doc["stderr"] = std_error;
  doc["L"] = length;
  doc["trials"] = trials;
  return doc.dump();
}

std::string ThresholdEstimate::to_csv_row(const std::string& label) const {
  std::string out;
  append_csv_row(out, label, p_th_hat, std_error, trials);
  return out;
}

namespace {

ConnectivityCurve two_point_impl(const Network& net, const double* p_scalar,
                                 std::span<const double> p_edge,
                                 const std::vector<std::pair<NodeId, NodeId>>& pairs,
                                 long trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  // bucket pairs by their distance in the full network
  std::map<int, std::vector<std::pair<NodeId, NodeId>>> buckets;
  for (const auto& pr : pairs) {
    if (auto d = graph_distance(net, pr.first, pr.second)) {
      buckets[*d].push_back(pr);
    }
  }

  std::vector<std::vector<std::pair<NodeId, NodeId>>> grouped;
  std::vector<int> distances;
  for (auto& [d, group] : buckets) {
    distances.push_back(d);
    grouped.push_back(std::move(group));
  }

  std::vector<std::vector<std::int32_t>> per_trial(
      static_cast<std::size_t>(trials),
      std::vector<std::int32_t>(grouped.size(), 0));
  for_each_trial(trials, threads, [&](long t) {
    std::vector<double> w =
        bond_weights(net.edges().size(), seed, static_cast<std::uint64_t>(t));
    PercolationSample s = p_scalar ? realize(net, std::move(w), *p_scalar)
                                   : realize(net, std::move(w), p_edge);
    for (std::size_t g = 0; g < grouped.size(); ++g) {
      std::int32_t hits = 0;
      for (const auto& [a, b] : grouped[g]) {
        if (s.clusters.connected(a, b)) ++hits;
      }
      per_trial[static_cast<std::size_t>(t)][g] = hits;
    }
  });

  ConnectivityCurve curve;
  for (std::size_t g = 0; g < grouped.size(); ++g) {
    long hits = 0;
    for (long t = 0; t < trials; ++t) hits += per_trial[static_cast<std::size_t>(t)][g];
    const double n_obs = static_cast<double>(trials) * static_cast<double>(grouped[g].size());
    const double p_hat = static_cast<double>(hits) / n_obs;
    curve.points.push_back(CurvePoint{static_cast<double>(distances[g]), p_hat,
                                      binomial_stderr(p_hat, n_obs),
                                      static_cast<long>(n_obs)});
  }
  return curve;
}

}  // namespace

ConnectivityCurve two_point(const Network& net, double p,
                            const std::vector<std::pair<NodeId, NodeId>>& pairs,
                            long trials, std::uint64_t seed, int threads) {
  return two_point_impl(net, &p, {}, pairs, trials, seed, threads);
}

ConnectivityCurve two_point(const Network& net, std::span<const double> p_edge,
                            const std::vector<std::pair<NodeId, NodeId>>& pairs,
                            long trials, std::uint64_t seed, int threads) {
  return two_point_impl(net, nullptr, p_edge, pairs, trials, seed, threads);
}

std::vector<std::pair<NodeId, NodeId>> pairs_at_distance(const Network& net,
                                                         int distance) {
  if (!net.has_coords() || net.spec().kind == LatticeKind::custom) {
    throw ValidationError("pair selection needs a lattice network");
  }
  if (distance < 0) throw ValidationError("distance must be >= 0");
  const int L = net.spec().length;
  const bool periodic = net.spec().boundary == Boundary::periodic;
  if (periodic ? distance > L / 2 : distance >= L) {
    throw ValidationError("distance exceeds the lattice extent");
  }

  std::vector<std::pair<NodeId, NodeId>> pairs;
  const LatticeKind kind = net.spec().kind;
  if (kind == LatticeKind::chain) {
    pairs.push_back({0, distance});
  } else if (kind == LatticeKind::square || kind == LatticeKind::triangular) {
    for (int y = 0; y < L; ++y) {
      pairs.push_back({y * L, y * L + distance});
    }
  } else {  // honeycomb: A nodes of cells (0,y) and (distance,y)
    for (int y = 0; y < L; ++y) {
      pairs.push_back({2 * (y * L), 2 * (y * L + distance)});
    }
  }
  return pairs;
}

std::string ConnectivityCurve::to_csv() const {
  std::string out = kCurveCsvHeader;
  for (const CurvePoint& pt : points) {
    append_csv_row(out, format_full(pt.x), pt.p_hat, pt.std_error, pt.trials);
  }
  return out;
}

std::string ConnectivityCurve::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const CurvePoint& pt : points) {
    rows.push_back({{"x", pt.x},
                    {"p_hat", pt.p_hat},
                    {"stderr", pt.std_error},
                    {"trials", pt.trials}});
  }
  return nlohmann::json{{"points", rows}}.dump();
}

}  // namespace qperc
