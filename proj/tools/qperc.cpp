#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qperc/csv.hpp"
#include "qperc/parallel.hpp"
#include "qperc/percolation.hpp"
#include "qperc/protocols.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::uint64_t kDefaultSeed = 123456789;

struct CommonArgs {
  std::uint64_t seed = kDefaultSeed;
  int threads = qperc::default_thread_count();
  std::string out;
  std::string format = "csv";
  std::string dump_network;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--seed", args.seed, "master RNG seed (default 123456789)");
  cmd->add_option("--threads", args.threads, "worker threads for trial loops")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", args.out, "write results to this file");
  cmd->add_option("--format", args.format, "results format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--dump-network", args.dump_network,
                  "write the constructed network as JSON to this file");
}

std::vector<double> parse_coeff_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(std::stod(item));
  return values;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(std::stoi(item));
  return values;
}

// Bond state given either as a full coefficient list or as --lambda1 for a
// qubit (the partner coefficient is 1 - lambda1).
struct BondArgs {
  std::string coeffs;
  double lambda1 = -1.0;

  void add(CLI::App* cmd) {
    auto* c = cmd->add_option("--coeffs", coeffs,
                              "Schmidt coefficients, descending, e.g. 0.8,0.2");
    auto* l = cmd->add_option("--lambda1", lambda1,
                              "largest Schmidt coefficient of a qubit bond");
    c->excludes(l);
  }

  qperc::SchmidtVector state() const {
    if (!coeffs.empty()) return qperc::SchmidtVector(parse_coeff_list(coeffs));
    if (lambda1 >= 0.0) return qperc::SchmidtVector::qubit(lambda1);
    throw qperc::ValidationError("specify the bond via --coeffs or --lambda1");
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Results go to stdout and, when --out is set, to the results file plus a
// <out>.manifest.json. The timestamp lives only in the manifest, so result
// files are bit-reproducible for a fixed seed.
void emit(const CommonArgs& args, const std::string& command,
          const nlohmann::json& parameters, const std::string& text) {
  std::cout << text;
  if (args.out.empty()) return;
  write_file(args.out, text);
  nlohmann::json manifest;
  manifest["command"] = command;
  manifest["version"] = kVersion;
  manifest["seed"] = args.seed;
  manifest["threads"] = args.threads;
  manifest["format"] = args.format;
  manifest["parameters"] = parameters;
  manifest["timestamp_utc"] = utc_timestamp();
  write_file(args.out + ".manifest.json", manifest.dump(2) + "\n");
}

void maybe_dump_network(const CommonArgs& args, const qperc::Network& net) {
  if (!args.dump_network.empty()) {
    write_file(args.dump_network, net.to_json() + "\n");
  }
}

std::string scalar_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = qperc::kCurveCsvHeader;
  for (const auto& [name, value] : rows) {
    qperc::append_csv_row(out, name, value, 0.0, 0);
  }
  return out;
}

void run_scp(const CommonArgs& common, const BondArgs& bond) {
  const qperc::SchmidtVector state = bond.state();
  const double value = qperc::scp(state);
  std::string text = common.format == "json"
                         ? nlohmann::json{{"scp", value}}.dump() + "\n"
                         : scalar_csv({{"scp", value}});
  emit(common, "scp", {{"coeffs", state.coeffs()}}, text);
}

void run_swap(const CommonArgs& common, const BondArgs& bond) {
  const qperc::SchmidtVector state = bond.state();
  const qperc::OutcomeDistribution dist = qperc::bell_swap(state, state);
  const double avg_scp = qperc::average_scp(dist);
  const double avg_conc = qperc::average_concurrence(dist);
  std::string text;
  if (common.format == "json") {
    nlohmann::json outcomes = nlohmann::json::array();
    for (const qperc::Outcome& o : dist.outcomes()) {
      outcomes.push_back({{"prob", o.prob}, {"state", o.state.coeffs()}});
    }
    text = nlohmann::json{{"outcomes", outcomes},
                          {"average_scp", avg_scp},
                          {"average_concurrence", avg_conc}}
               .dump() +
           "\n";
  } else {
    std::vector<std::pair<std::string, double>> rows;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      rows.push_back({"outcome_" + std::to_string(i) + "_prob", dist[i].prob});
    }
    rows.push_back({"average_scp", avg_scp});
    rows.push_back({"average_concurrence", avg_conc});
    text = scalar_csv(rows);
  }
  emit(common, "swap", {{"coeffs", state.coeffs()}}, text);
}

void run_chain(const CommonArgs& common, const BondArgs& bond, int repeaters,
               long trials) {
  const qperc::SchmidtVector state = bond.state();
  const qperc::McOptions opts{trials, common.seed, common.threads};

  const qperc::Network net = qperc::build_lattice(
      qperc::LatticeSpec{qperc::LatticeKind::chain, repeaters + 2,
                         qperc::Boundary::open},
      state, 1);
  maybe_dump_network(common, net);

  qperc::ProtocolReport cep_report =
      qperc::cep(net, 0, net.node_count() - 1, opts);
  qperc::ProtocolReport swap_report = qperc::chain_swap(repeaters, state, opts);

  std::string text;
  if (common.format == "json") {
    text = nlohmann::json{
               {"strategies",
                nlohmann::json::array(
                    {nlohmann::json::parse(cep_report.to_json()),
                     nlohmann::json::parse(swap_report.to_json())})}}
               .dump() +
           "\n";
  } else {
    text = qperc::kReportCsvHeader + cep_report.to_csv() + swap_report.to_csv();
  }
  emit(common, "chain",
       {{"coeffs", state.coeffs()}, {"N", repeaters}, {"trials", trials}}, text);
}

void run_thresholds(const CommonArgs& common, const std::string& kind_name,
                    int length, long trials, double tol) {
  std::vector<qperc::LatticeKind> kinds;
  if (kind_name == "all") {
    kinds = {qperc::LatticeKind::square, qperc::LatticeKind::triangular,
             qperc::LatticeKind::honeycomb};
  } else {
    kinds = {qperc::lattice_kind_from_string(kind_name)};
  }

  std::string csv = qperc::kCurveCsvHeader;
  nlohmann::json estimates = nlohmann::json::object();
  for (qperc::LatticeKind kind : kinds) {
    std::cerr << "estimating " << qperc::to_string(kind) << " threshold (L="
              << length << ", " << trials << " trials/point)\n";
    const qperc::ThresholdEstimate est = qperc::estimate_threshold(
        kind, length, trials, tol, common.seed, common.threads);
    csv += est.to_csv_row(qperc::to_string(kind));
    estimates[qperc::to_string(kind)] = nlohmann::json::parse(est.to_json());
    if (!common.dump_network.empty()) {
      maybe_dump_network(common, qperc::build_lattice(
                                     qperc::LatticeSpec{kind, length,
                                                        qperc::Boundary::periodic},
                                     qperc::SchmidtVector::bell(), 1));
    }
  }

  std::string text = common.format == "json"
                         ? nlohmann::json{{"estimates", estimates}}.dump() + "\n"
                         : csv;
  emit(common, "thresholds",
       {{"kind", kind_name}, {"L", length}, {"trials", trials}, {"tol", tol}},
       text);
}

void run_square2x2(const CommonArgs& common, const BondArgs& bond, long trials) {
  const qperc::SchmidtVector state = bond.state();
  const qperc::McOptions opts{trials, common.seed, common.threads};
  maybe_dump_network(common,
                     qperc::build_lattice(
                         qperc::LatticeSpec{qperc::LatticeKind::square, 2,
                                            qperc::Boundary::open},
                         state, 1));
  const qperc::ProtocolReport report = qperc::square2x2(state, opts);
  std::string text = common.format == "json"
                         ? report.to_json() + "\n"
                         : qperc::kReportCsvHeader + report.to_csv();
  emit(common, "square2x2", {{"coeffs", state.coeffs()}, {"trials", trials}},
       text);
}

void run_honeycomb_demo(const CommonArgs& common, double lambda1, int length,
                        long trials, const std::string& dists) {
  const qperc::McOptions opts{trials, common.seed, common.threads};
  std::vector<int> distances;
  if (!dists.empty()) distances = parse_int_list(dists);
  std::cerr << "honeycomb demo: lambda1=" << lambda1 << " L=" << length << " "
            << trials << " trials per strategy\n";
  const qperc::HoneycombDemoReport demo =
      qperc::honeycomb_demo(lambda1, length, opts, distances);
  if (!common.dump_network.empty()) {
    maybe_dump_network(common,
                       qperc::build_lattice(
                           qperc::LatticeSpec{qperc::LatticeKind::honeycomb,
                                              length, qperc::Boundary::periodic},
                           qperc::SchmidtVector::qubit(lambda1), 2));
  }
  std::string text = common.format == "json" ? demo.to_json() + "\n" : demo.to_csv();
  emit(common, "honeycomb-demo",
       {{"lambda1", lambda1}, {"L", length}, {"trials", trials}}, text);
}

void run_two_point(const CommonArgs& common, const std::string& kind_name,
                   const std::string& boundary_name, int length, double p,
                   const std::string& dists, long trials) {
  const qperc::LatticeSpec spec{qperc::lattice_kind_from_string(kind_name),
                                length,
                                qperc::boundary_from_string(boundary_name)};
  const qperc::Network net =
      qperc::build_lattice(spec, qperc::SchmidtVector::bell(), 1);
  maybe_dump_network(common, net);

  std::vector<std::pair<qperc::NodeId, qperc::NodeId>> pairs;
  for (int d : parse_int_list(dists)) {
    auto group = qperc::pairs_at_distance(net, d);
    pairs.insert(pairs.end(), group.begin(), group.end());
  }
  const qperc::ConnectivityCurve curve =
      qperc::two_point(net, p, pairs, trials, common.seed, common.threads);
  std::string text =
      common.format == "json" ? curve.to_json() + "\n" : curve.to_csv();
  emit(common, "two-point",
       {{"kind", kind_name}, {"boundary", boundary_name}, {"L", length},
        {"p", p}, {"dists", dists}, {"trials", trials}},
       text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement distribution experiments on bond-percolated networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto* scp_cmd =
      app.add_subcommand("scp", "singlet conversion probability of a bond");
  CommonArgs scp_common;
  BondArgs scp_bond;
  scp_bond.add(scp_cmd);
  add_common(scp_cmd, scp_common);

  auto* swap_cmd = app.add_subcommand(
      "swap", "Bell-measurement outcome distribution for two equal bonds");
  CommonArgs swap_common;
  BondArgs swap_bond;
  swap_bond.add(swap_cmd);
  add_common(swap_cmd, swap_common);

  auto* chain_cmd = app.add_subcommand(
      "chain", "CEP versus entanglement swapping on a repeater chain");
  CommonArgs chain_common;
  BondArgs chain_bond;
  int chain_n = 1;
  long chain_trials = 100000;
  chain_bond.add(chain_cmd);
  chain_cmd->add_option("--N", chain_n, "number of repeaters")
      ->check(CLI::NonNegativeNumber);
  chain_cmd->add_option("--trials", chain_trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  add_common(chain_cmd, chain_common);

  auto* th_cmd = app.add_subcommand(
      "thresholds",
      "bond percolation thresholds by bisection of the spanning frequency");
  CommonArgs th_common;
  std::string th_kind = "all";
  int th_length = 64;
  long th_trials = 2000;
  double th_tol = 0.005;
  th_cmd->add_option("--kind", th_kind, "square, triangular, honeycomb, or all")
      ->check(CLI::IsMember({"square", "triangular", "honeycomb", "all"}));
  th_cmd->add_option("--L", th_length, "lattice size")->check(CLI::PositiveNumber);
  th_cmd->add_option("--trials", th_trials, "trials per bisection point")
      ->check(CLI::PositiveNumber);
  th_cmd->add_option("--tol", th_tol, "bisection resolution (>= 0.005)");
  add_common(th_cmd, th_common);

  auto* sq_cmd = app.add_subcommand(
      "square2x2", "CEP versus swap strategy across the 2x2 square diagonal");
  CommonArgs sq_common;
  BondArgs sq_bond;
  long sq_trials = 100000;
  sq_bond.add(sq_cmd);
  sq_cmd->add_option("--trials", sq_trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  add_common(sq_cmd, sq_common);

  auto* hc_cmd = app.add_subcommand(
      "honeycomb-demo", "CEP versus swap-then-CEP on a doubled-bond honeycomb");
  CommonArgs hc_common;
  double hc_lambda1 = 0.823;
  int hc_length = 32;
  long hc_trials = 2000;
  std::string hc_dists;
  hc_cmd->add_option("--lambda1", hc_lambda1,
                     "largest Schmidt coefficient in [0.5, 1)");
  hc_cmd->add_option("--L", hc_length, "lattice size")->check(CLI::PositiveNumber);
  hc_cmd->add_option("--trials", hc_trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  hc_cmd->add_option("--dists", hc_dists,
                     "comma-separated cell distances for the curves");
  add_common(hc_cmd, hc_common);

  auto* tp_cmd = app.add_subcommand(
      "two-point", "pair connectivity versus distance at a fixed open probability");
  CommonArgs tp_common;
  std::string tp_kind = "square";
  std::string tp_boundary = "periodic";
  int tp_length = 64;
  double tp_p = 0.5;
  std::string tp_dists = "1,2,4,8,16";
  long tp_trials = 2000;
  tp_cmd->add_option("--kind", tp_kind, "lattice kind");
  tp_cmd->add_option("--boundary", tp_boundary, "open or periodic");
  tp_cmd->add_option("--L", tp_length, "lattice size")->check(CLI::PositiveNumber);
  tp_cmd->add_option("--p", tp_p, "open probability per edge");
  tp_cmd->add_option("--dists", tp_dists, "comma-separated cell distances");
  tp_cmd->add_option("--trials", tp_trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber);
  add_common(tp_cmd, tp_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nrun with --help for usage\n";
    return 2;
  }

  try {
    if (scp_cmd->parsed()) {
      run_scp(scp_common, scp_bond);
    } else if (swap_cmd->parsed()) {
      run_swap(swap_common, swap_bond);
    } else if (chain_cmd->parsed()) {
      run_chain(chain_common, chain_bond, chain_n, chain_trials);
    } else if (th_cmd->parsed()) {
      run_thresholds(th_common, th_kind, th_length, th_trials, th_tol);
    } else if (sq_cmd->parsed()) {
      run_square2x2(sq_common, sq_bond, sq_trials);
    } else if (hc_cmd->parsed()) {
      run_honeycomb_demo(hc_common, hc_lambda1, hc_length, hc_trials, hc_dists);
    } else if (tp_cmd->parsed()) {
      run_two_point(tp_common, tp_kind, tp_boundary, tp_length, tp_p, tp_dists,
                    tp_trials);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
