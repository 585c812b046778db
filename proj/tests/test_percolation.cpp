#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "helpers.hpp"
#include "qperc/percolation.hpp"
#include "qperc/protocols.hpp"

using namespace qperc;

namespace {

// Component labels by breadth-first search: the independent clustering oracle.
std::vector<int> bfs_components(int nodes, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
  for (auto [u, v] : edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  std::vector<int> label(static_cast<std::size_t>(nodes), -1);
  int next = 0;
  for (int start = 0; start < nodes; ++start) {
    if (label[static_cast<std::size_t>(start)] >= 0) continue;
    std::deque<int> queue{start};
    label[static_cast<std::size_t>(start)] = next;
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      for (int other : adj[static_cast<std::size_t>(cur)]) {
        if (label[static_cast<std::size_t>(other)] < 0) {
          label[static_cast<std::size_t>(other)] = next;
          queue.push_back(other);
        }
      }
    }
    ++next;
  }
  return label;
}

Network square_lattice(int length, Boundary boundary = Boundary::periodic) {
  return build_lattice(LatticeSpec{LatticeKind::square, length, boundary},
                       SchmidtVector::bell());
}

}  // namespace

TEST_SUITE_BEGIN("percolation");

TEST_CASE("union-find basics") {
  UnionFind uf(6);
  CHECK(uf.component_count() == 6);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(1, 2));
  CHECK_FALSE(uf.unite(0, 2));
  CHECK(uf.connected(0, 2));
  CHECK_FALSE(uf.connected(0, 3));
  CHECK(uf.component_size(2) == 3);
  CHECK(uf.component_count() == 4);
  CHECK(uf.largest_component_size() == 3);
  CHECK(uf.find(4) == uf.find(4));

  int total = 0;
  std::vector<bool> seen_root(6, false);
  for (int n = 0; n < 6; ++n) {
    const int root = uf.find(n);
    if (!seen_root[static_cast<std::size_t>(root)]) {
      seen_root[static_cast<std::size_t>(root)] = true;
      total += uf.component_size(n);
    }
  }
  CHECK(total == 6);
}

TEST_CASE("union-find matches breadth-first search on random graphs") {
  Rng rng(71);
  for (int g = 0; g < 200; ++g) {
    const int nodes = 2 + static_cast<int>(rng.uniform() * 49);
    std::vector<std::pair<int, int>> edges;
    const int m = static_cast<int>(rng.uniform() * 2.0 * nodes);
    for (int e = 0; e < m; ++e) {
      int u = static_cast<int>(rng.uniform() * nodes);
      int v = static_cast<int>(rng.uniform() * nodes);
      if (u == v) continue;
      edges.push_back({u, v});
    }
    UnionFind uf(nodes);
    for (auto [u, v] : edges) uf.unite(u, v);
    const std::vector<int> oracle = bfs_components(nodes, edges);
    for (int a = 0; a < nodes; ++a) {
      for (int b = a + 1; b < nodes; ++b) {
        CHECK(uf.connected(a, b) ==
              (oracle[static_cast<std::size_t>(a)] == oracle[static_cast<std::size_t>(b)]));
      }
    }
  }
}

TEST_CASE("sampling extremes and validation") {
  const Network net = square_lattice(4);
  Rng rng(72);

  PercolationSample closed = sample(net, 0.0, rng);
  CHECK(closed.clusters.component_count() == net.node_count());
  CHECK(closed.clusters.largest_component_size() == 1);

  PercolationSample full = sample(net, 1.0, rng);
  CHECK(full.clusters.component_count() == 1);
  CHECK(connected(full, 0, net.node_count() - 1));
  CHECK(spans(net, full, Axis::x));
  CHECK(spans(net, full, Axis::y));
  CHECK_FALSE(spans(net, closed, Axis::x));
  CHECK_FALSE(connected(closed, 0, 1));
  CHECK(connected(closed, 3, 3));

  CHECK_THROWS_AS(sample(net, 1.5, rng), ValidationError);
  CHECK_THROWS_AS(sample(net, -0.1, rng), ValidationError);
  CHECK_THROWS_AS(realize(net, std::vector<double>(3, 0.5), 0.5), ValidationError);

  for (std::size_t e = 0; e < full.open.size(); ++e) {
    CHECK(full.open[e] == (full.weights[e] < 1.0));
  }
}

TEST_CASE("keyed weights are deterministic and order-independent") {
  const Network net = square_lattice(8);
  const std::vector<double> w1 = bond_weights(net.edges().size(), 99, 5);
  const std::vector<double> w2 = bond_weights(net.edges().size(), 99, 5);
  CHECK(w1 == w2);
  const std::vector<double> w3 = bond_weights(net.edges().size(), 99, 6);
  CHECK(w1 != w3);
  for (double w : w1) {
    CHECK(w >= 0.0);
    CHECK(w < 1.0);
  }
}

TEST_CASE("coupled weights give monotone configurations") {
  const Network net = square_lattice(12);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    std::vector<double> weights = bond_weights(net.edges().size(), 7, trial);
    PercolationSample lo = realize(net, weights, 0.35);
    PercolationSample hi = realize(net, weights, 0.65);
    for (std::size_t e = 0; e < weights.size(); ++e) {
      if (lo.open[e]) CHECK(hi.open[e]);
    }
    // connectivity and spanning inherit the monotonicity exactly
    for (NodeId a = 0; a < net.node_count(); a += 17) {
      for (NodeId b = a + 1; b < net.node_count(); b += 13) {
        if (connected(lo, a, b)) CHECK(connected(hi, a, b));
      }
    }
    if (spans(net, lo, Axis::x)) CHECK(spans(net, hi, Axis::x));
  }
}

TEST_CASE("winding detection on the torus") {
  const Network net = square_lattice(8);
  // open exactly one full row of x-direction edges: wraps x, not y
  std::vector<double> probs(net.edges().size(), 0.0);
  for (int e = 0; e < net.edge_count(); ++e) {
    const Edge& edge = net.edges()[static_cast<std::size_t>(e)];
    if (edge.shift[0] == 1 && net.cell(edge.u)[1] == 3) probs[static_cast<std::size_t>(e)] = 1.0;
  }
  Rng rng(73);
  PercolationSample s = sample(net, std::span<const double>(probs), rng);
  CHECK(spans(net, s, Axis::x));
  CHECK_FALSE(spans(net, s, Axis::y));
}

TEST_CASE("face-to-face spanning on open lattices") {
  const Network chain = build_lattice(
      LatticeSpec{LatticeKind::chain, 5, Boundary::open}, SchmidtVector::bell());
  Rng rng(74);
  PercolationSample all = sample(chain, 1.0, rng);
  CHECK(spans(chain, all, Axis::x));
  PercolationSample none = sample(chain, 0.0, rng);
  CHECK_FALSE(spans(chain, none, Axis::x));

  // custom networks have no geometry to span
  const Network custom = custom_network(2, {Edge{0, 1, {0, 0}, {SchmidtVector::bell()}}});
  Rng rng2(75);
  PercolationSample s = sample(custom, 1.0, rng2);
  CHECK_THROWS_AS(spans(custom, s, Axis::x), ValidationError);
}

TEST_CASE("largest-cluster fraction estimates") {
  const Network net = square_lattice(16);
  const ThetaEstimate full = estimate_theta(net, 1.0, 10, 80);
  CHECK(full.theta == 1.0);
  CHECK(full.std_error == 0.0);

  const ThetaEstimate empty = estimate_theta(net, 0.0, 10, 80);
  CHECK(empty.theta == doctest::Approx(1.0 / net.node_count()).epsilon(1e-12));

  CHECK_THROWS_AS(estimate_theta(net, 0.5, 0, 80), ValidationError);
}

TEST_CASE("theta grows across the transition") {
  const Network net = square_lattice(64);
  const long trials = 2000;
  const ThetaEstimate sub = estimate_theta(net, 0.4, trials, 81, 2);
  const ThetaEstimate sup = estimate_theta(net, 0.6, trials, 81, 2);
  const double sigma = std::sqrt(sub.std_error * sub.std_error +
                                 sup.std_error * sup.std_error);
  CHECK(sup.theta - sub.theta >= 5.0 * sigma);
}

TEST_CASE("spanning frequency at the known thresholds") {
  const long trials = 1000;
  for (LatticeKind kind :
       {LatticeKind::square, LatticeKind::triangular, LatticeKind::honeycomb}) {
    const Network net = build_lattice(LatticeSpec{kind, 32, Boundary::periodic},
                                      SchmidtVector::bell());
    const double p_th = lattice_threshold(kind);
    long hits = 0;
    for (long t = 0; t < trials; ++t) {
      PercolationSample s =
          realize(net, bond_weights(net.edges().size(), 82, static_cast<std::uint64_t>(t)), p_th);
      hits += spans(net, s, Axis::x) ? 1 : 0;
    }
    const double freq = static_cast<double>(hits) / trials;
    CAPTURE(to_string(kind));
    CHECK(freq >= 0.25);
    CHECK(freq <= 0.75);
  }
}

TEST_CASE("square spanning frequency near one half at criticality") {
  const Network net = square_lattice(64);
  const long trials = 2000;
  long hits = 0;
  for (long t = 0; t < trials; ++t) {
    PercolationSample s =
        realize(net, bond_weights(net.edges().size(), 83, static_cast<std::uint64_t>(t)), 0.5);
    hits += spans(net, s, Axis::x) ? 1 : 0;
  }
  const double freq = static_cast<double>(hits) / trials;
  const double sigma = std::sqrt(0.5 * 0.5 / trials);
  CHECK(std::abs(freq - 0.5) <= 3.0 * sigma);

  // subcritical: well below the crossing
  long sub_hits = 0;
  for (long t = 0; t < 1000; ++t) {
    PercolationSample s =
        realize(net, bond_weights(net.edges().size(), 83, static_cast<std::uint64_t>(t)), 0.45);
    sub_hits += spans(net, s, Axis::x) ? 1 : 0;
  }
  CHECK(static_cast<double>(sub_hits) / 1000.0 < 0.2);
}

TEST_CASE("threshold estimation input checks") {
  CHECK_THROWS_AS(estimate_threshold(LatticeKind::chain, 16, 100, 0.01, 1),
                  ValidationError);
  CHECK_THROWS_AS(estimate_threshold(LatticeKind::square, 16, 100, 0.001, 1),
                  ValidationError);
  CHECK_THROWS_AS(estimate_threshold(LatticeKind::square, 16, 0, 0.01, 1),
                  ValidationError);
}

TEST_CASE("threshold estimate lands near the square value") {
  const ThresholdEstimate est = estimate_threshold(LatticeKind::square, 32, 400, 0.01, 84, 2);
  CHECK(std::abs(est.p_th_hat - 0.5) < 0.03);
  CHECK(est.std_error > 0.0);
  CHECK(est.length == 32);
  CHECK(est.trials == 400);

  const nlohmann::json doc = nlohmann::json::parse(est.to_json());
  CHECK(doc.at("L") == 32);
  CHECK(doc.at("p_th_hat").get<double>() == est.p_th_hat);
}

TEST_CASE("two-point connectivity") {
  const Network net = square_lattice(16);

  SUBCASE("distance zero and full lattice") {
    std::vector<std::pair<NodeId, NodeId>> pairs{{3, 3}, {0, 1}, {0, 5}};
    const ConnectivityCurve curve = two_point(net, 1.0, pairs, 50, 85);
    REQUIRE(curve.points.size() == 3);
    for (const CurvePoint& pt : curve.points) {
      CHECK(pt.p_hat == 1.0);
      CHECK(pt.std_error == 0.0);
    }
    CHECK(curve.points[0].x == 0.0);
    CHECK(curve.points[1].x == 1.0);
  }

  SUBCASE("csv and json formats") {
    const ConnectivityCurve curve =
        two_point(net, 0.4, pairs_at_distance(net, 2), 100, 86);
    const std::string csv = curve.to_csv();
    CHECK(csv.rfind("x,p_hat,stderr,trials\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    const nlohmann::json doc = nlohmann::json::parse(curve.to_json());
    CHECK(doc.at("points").size() == 1);
    CHECK(doc.at("points")[0].at("x") == 2.0);
  }

  SUBCASE("pair selection validation") {
    CHECK_THROWS_AS(pairs_at_distance(net, 100), ValidationError);
    CHECK_THROWS_AS(pairs_at_distance(net, -1), ValidationError);
    const Network custom = custom_network(2, {Edge{0, 1, {0, 0}, {SchmidtVector::bell()}}});
    CHECK_THROWS_AS(pairs_at_distance(custom, 1), ValidationError);
  }
}

TEST_CASE("subcritical connectivity decays at least exponentially") {
  const Network net = square_lattice(64);
  const double p = 0.3;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int d : {2, 3, 4, 5, 6, 8, 16}) {
    auto group = pairs_at_distance(net, d);
    pairs.insert(pairs.end(), group.begin(), group.end());
  }
  const ConnectivityCurve curve = two_point(net, p, pairs, 2000, 87, 2);
  REQUIRE(curve.points.size() == 7);

  // least-squares fit of log p_hat over distances 2..8
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const CurvePoint& pt : curve.points) {
    if (pt.x > 8.5) continue;
    const double y = std::log(pt.p_hat);
    sx += pt.x;
    sy += y;
    sxx += pt.x * pt.x;
    sxy += pt.x * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  CHECK(slope < 0.0);

  const CurvePoint& far = curve.points.back();
  CHECK(far.x == 16.0);
  CHECK(far.p_hat < std::exp(intercept + slope * far.x));
}

TEST_CASE("heterogeneous edge probabilities") {
  // chain with a guaranteed-open first edge and a closed second edge
  const Network chain = build_lattice(
      LatticeSpec{LatticeKind::chain, 3, Boundary::open}, SchmidtVector::bell());
  std::vector<double> probs{1.0, 0.0};
  Rng rng(88);
  PercolationSample s = sample(chain, std::span<const double>(probs), rng);
  CHECK(connected(s, 0, 1));
  CHECK_FALSE(connected(s, 1, 2));
  CHECK_THROWS_AS(sample(chain, std::span<const double>(std::vector<double>{0.5}), rng),
                  ValidationError);
}

TEST_SUITE_END();
