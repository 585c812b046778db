#include "qperc/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "qperc/csv.hpp"
#include "qperc/parallel.hpp"

namespace qperc {

double lattice_threshold(LatticeKind kind) {
  static const double sin_pi18 = std::sin(std::numbers::pi / 18.0);
  switch (kind) {
    case LatticeKind::square: return 0.5;
    case LatticeKind::triangular: return 2.0 * sin_pi18;
    case LatticeKind::honeycomb: return 1.0 - 2.0 * sin_pi18;
    default: throw ValidationError("no tabulated threshold for this kind");
  }
}

double ProtocolReport::param(const std::string& name) const {
  for (const auto& [key, value] : params)
    if (key == name) return value;
  throw ValidationError("unknown report parameter: " + name);
}

const McEstimate& ProtocolReport::estimate(const std::string& name) const {
  for (const auto& [key, value] : estimates)
    if (key == name) return value;
  throw ValidationError("unknown report estimate: " + name);
}

bool ProtocolReport::has_exact(const std::string& name) const {
  for (const auto& [key, value] : exact)
    if (key == name) return true;
  return false;
}

double ProtocolReport::exact_value(const std::string& name) const {
  for (const auto& [key, value] : exact)
    if (key == name) return value;
  throw ValidationError("no closed form named: " + name);
}

std::string ProtocolReport::to_json() const {
  nlohmann::json doc;
  doc["strategy"] = strategy;
  doc["trials"] = trials;
  doc["seed"] = seed;
  for (const auto& [key, value] : params) doc[key] = value;
  nlohmann::json est = nlohmann::json::object();
  for (const auto& [key, value] : estimates) {
    est[key] = {{"value", value.value},
                {"stderr", value.std_error},
                {"trials", value.trials}};
    if (key == "spanning") {
      doc["spanning_freq"] = value.value;
      doc["spanning_stderr"] = value.std_error;
    }
  }
  doc["estimates"] = std::move(est);
  nlohmann::json ex = nlohmann::json::object();
  for (const auto& [key, value] : exact) ex[key] = value;
  doc["exact"] = std::move(ex);
  nlohmann::json rows = nlohmann::json::array();
  for (const CurvePoint& pt : curve.points) {
    rows.push_back({{"x", pt.x},
                    {"p_hat", pt.p_hat},
                    {"stderr", pt.std_error},
                    {"trials", pt.trials}});
  }
  doc["curve"] = std::move(rows);
  return doc.dump();
}

std::string ProtocolReport::to_csv() const {
  std::string out;
  for (const auto& [key, value] : exact) {
    append_csv_row(out, strategy + "," + key + "_exact", value, 0.0, 0);
  }
  for (const auto& [key, value] : estimates) {
    append_csv_row(out, strategy + "," + key, value.value, value.std_error,
                   value.trials);
  }
  for (const CurvePoint& pt : curve.points) {
    append_csv_row(out, strategy + "," + format_full(pt.x), pt.p_hat,
                   pt.std_error, pt.trials);
  }
  return out;
}

std::vector<double> cep_edge_probabilities(const Network& net) {
  std::vector<double> probs;
  probs.reserve(net.edges().size());
  for (const Edge& e : net.edges()) {
    SchmidtVector joint = e.copies.front();
    for (std::size_t c = 1; c < e.copies.size(); ++c) {
      joint = tensor(joint, e.copies[c]);
    }
    probs.push_back(scp(joint));
  }
  return probs;
}

namespace {

McEstimate binomial_estimate(long hits, long trials) {
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
  return McEstimate{p, se, trials};
}

McEstimate sample_mean_estimate(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return McEstimate{mean, se, static_cast<long>(values.size())};
}

long count_hits(const std::vector<std::uint8_t>& hits) {
  long total = 0;
  for (std::uint8_t h : hits) total += h;
  return total;
}

}  // namespace

ProtocolReport cep(const Network& net, NodeId a, NodeId b, const McOptions& opts) {
  if (a < 0 || a >= net.node_count() || b < 0 || b >= net.node_count()) {
    throw ValidationError("node id out of range");
  }
  if (opts.trials < 1) throw ValidationError("trials must be >= 1");

  const std::vector<double> p_edge = cep_edge_probabilities(net);
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(opts.trials), 0);
  for_each_trial(opts.trials, opts.threads, [&](long t) {
    PercolationSample s =
        realize(net, bond_weights(net.edges().size(), opts.seed,
                                  static_cast<std::uint64_t>(t)),
                std::span<const double>(p_edge));
    hits[static_cast<std::size_t>(t)] = s.clusters.connected(a, b) ? 1 : 0;
  });

  ProtocolReport report;
  report.strategy = "cep";
  report.trials = opts.trials;
  report.seed = opts.seed;
  report.params = {{"a", static_cast<double>(a)}, {"b", static_cast<double>(b)}};
  if (std::adjacent_find(p_edge.begin(), p_edge.end(),
                         std::not_equal_to<double>()) == p_edge.end()) {
    report.params.push_back({"p_edge", p_edge.front()});
  }
  report.estimates = {{"p_connect", binomial_estimate(count_hits(hits), opts.trials)}};
  if (net.spec().kind == LatticeKind::chain) {
    // unique path: closed form is the product of the edge probabilities
    double prod = 1.0;
    for (NodeId n = std::min(a, b); n < std::max(a, b); ++n) {
      prod *= p_edge[static_cast<std::size_t>(n)];
    }
    report.exact = {{"p_connect", prod}};
  }
  return report;
}

ProtocolReport chain_swap(int repeaters, const SchmidtVector& bond,
                          const McOptions& opts) {
  if (repeaters < 0) throw ValidationError("repeater count must be >= 0");
  if (opts.trials < 1) throw ValidationError("trials must be >= 1");
  const SchmidtVector qubit_bond =
      bond.dim() <= 2 ? SchmidtVector::qubit(bond.lambda1()) : nielsen_reduce(bond);

  std::vector<double> scp_vals(static_cast<std::size_t>(opts.trials));
  std::vector<double> conc_vals(static_cast<std::size_t>(opts.trials));
  for_each_trial(opts.trials, opts.threads, [&](long t) {
    Rng rng = Rng::stream(opts.seed, static_cast<std::uint64_t>(t));
    SchmidtVector state = qubit_bond;
    for (int k = 0; k < repeaters; ++k) {
      state = sample_outcome(bell_swap(state, qubit_bond), rng);
    }
    scp_vals[static_cast<std::size_t>(t)] = scp(state);
    conc_vals[static_cast<std::size_t>(t)] = concurrence(state);
  });

  ProtocolReport report;
  report.strategy = "swap";
  report.trials = opts.trials;
  report.seed = opts.seed;
  report.params = {{"N", static_cast<double>(repeaters)},
                   {"lambda1", qubit_bond.lambda1()}};
  report.estimates = {{"scp", sample_mean_estimate(scp_vals)},
                      {"concurrence", sample_mean_estimate(conc_vals)}};
  report.exact = {{"concurrence",
                   chain_concurrence_exact(std::vector<SchmidtVector>(
                       static_cast<std::size_t>(repeaters) + 1, qubit_bond))}};
  if (repeaters <= 1) {
    // one swap attains the single-bond conversion probability
    report.exact.push_back({"scp", scp(qubit_bond)});
  }
  return report;
}

ProtocolReport square2x2(const SchmidtVector& bond, const McOptions& opts) {
  if (bond.dim() != 2) throw DimensionError("square2x2 requires a qubit bond");
  if (opts.trials < 1) throw ValidationError("trials must be >= 1");
  const double p_ok = scp(bond);

  // 4-cycle with the target nodes on the diagonal: 0-1-3 and 0-2-3
  const Network net = build_lattice(
      LatticeSpec{LatticeKind::square, 2, Boundary::open}, bond, 1);
  const NodeId a = 0, b = 3;

  const OutcomeDistribution swap_dist = bell_swap(bond, bond);
  std::vector<std::uint8_t> cep_hits(static_cast<std::size_t>(opts.trials), 0);
  std::vector<std::uint8_t> swap_hits(static_cast<std::size_t>(opts.trials), 0);
  for_each_trial(opts.trials, opts.threads, [&](long t) {
    Rng rng = Rng::stream(opts.seed, static_cast<std::uint64_t>(t));
    std::vector<double> w(net.edges().size());
    for (double& x : w) x = rng.uniform();
    PercolationSample s = realize(net, std::move(w), p_ok);
    cep_hits[static_cast<std::size_t>(t)] = s.clusters.connected(a, b) ? 1 : 0;
    bool ok = false;
    for (int chain = 0; chain < 2; ++chain) {
      const SchmidtVector& outcome = sample_outcome(swap_dist, rng);
      const bool converted = rng.uniform() < scp(outcome);
      ok = ok || converted;
    }
    swap_hits[static_cast<std::size_t>(t)] = ok ? 1 : 0;
  });

  ProtocolReport report;
  report.strategy = "square2x2";
  report.trials = opts.trials;
  report.seed = opts.seed;
  report.params = {{"lambda1", bond.lambda1()}, {"p_ok", p_ok}};
  report.estimates = {{"cep", binomial_estimate(count_hits(cep_hits), opts.trials)},
                      {"swap", binomial_estimate(count_hits(swap_hits), opts.trials)}};
  const double q = 1.0 - p_ok * p_ok;
  report.exact = {{"cep", 1.0 - q * q},
                  {"swap", 1.0 - (1.0 - p_ok) * (1.0 - p_ok)}};
  return report;
}

namespace {

ProtocolReport lattice_strategy_report(
    const char* name, const Network& net, double p_edge, double p_th,
    const std::vector<int>& distances, const McOptions& opts, std::uint64_t seed) {
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(opts.trials), 0);
  for_each_trial(opts.trials, opts.threads, [&](long t) {
    PercolationSample s = realize(
        net, bond_weights(net.edges().size(), seed, static_cast<std::uint64_t>(t)),
        p_edge);
    hits[static_cast<std::size_t>(t)] = spans(net, s, Axis::x) ? 1 : 0;
  });

  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int d : distances) {
    auto group = pairs_at_distance(net, d);
    pairs.insert(pairs.end(), group.begin(), group.end());
  }

  ProtocolReport report;
  report.strategy = name;
  report.trials = opts.trials;
  report.seed = opts.seed;
  report.params = {{"L", static_cast<double>(net.spec().length)},
                   {"p_edge", p_edge},
                   {"p_th", p_th}};
  report.estimates = {{"spanning", binomial_estimate(count_hits(hits), opts.trials)}};
  report.curve = two_point(net, p_edge, pairs, opts.trials, mix64(seed), opts.threads);
  return report;
}

}  // namespace

HoneycombDemoReport honeycomb_demo(double lambda1, int length,
                                   const McOptions& opts,
                                   std::vector<int> distances) {
  if (!(lambda1 >= 0.5 && lambda1 < 1.0)) {
    throw ValidationError("lambda1 must lie in [0.5, 1)");
  }
  const SchmidtVector bond = SchmidtVector::qubit(lambda1);
  const Network honeycomb = build_lattice(
      LatticeSpec{LatticeKind::honeycomb, length, Boundary::periodic}, bond, 2);
  TriangularTransform transformed = honeycomb_to_triangular(honeycomb);

  const double p_cep = cep_edge_probabilities(honeycomb).front();
  const double p_swap = transformed.edge_scp.front();

  if (distances.empty()) {
    for (int d = 1; d <= length / 2; d *= 2) distances.push_back(d);
  }

  HoneycombDemoReport demo;
  demo.honeycomb_p_th = lattice_threshold(LatticeKind::honeycomb);
  demo.triangular_p_th = lattice_threshold(LatticeKind::triangular);
  demo.cep_strategy = lattice_strategy_report(
      "cep", honeycomb, p_cep, demo.honeycomb_p_th, distances, opts,
      mix64(opts.seed ^ 0x11));
  demo.swap_strategy = lattice_strategy_report(
      "swap_cep", transformed.net, p_swap, demo.triangular_p_th, distances, opts,
      mix64(opts.seed ^ 0x22));
  auto set_lambda = [lambda1](ProtocolReport& r) {
    r.params.insert(r.params.begin(), {"lambda1", lambda1});
  };
  set_lambda(demo.cep_strategy);
  set_lambda(demo.swap_strategy);
  return demo;
}

std::string HoneycombDemoReport::to_json() const {
  nlohmann::json doc;
  doc["strategies"] = nlohmann::json::array(
      {nlohmann::json::parse(cep_strategy.to_json()),
       nlohmann::json::parse(swap_strategy.to_json())});
  doc["thresholds"] = {{"honeycomb", honeycomb_p_th},
                       {"triangular", triangular_p_th}};
  return doc.dump();
}

std::string HoneycombDemoReport::to_csv() const {
  std::string out = kReportCsvHeader;
  out += cep_strategy.to_csv();
  out += swap_strategy.to_csv();
  return out;
}

}  // namespace qperc
