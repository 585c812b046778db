#include "qperc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include <nlohmann/json.hpp>

namespace qperc {

const char* to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::chain: return "chain";
    case LatticeKind::square: return "square";
    case LatticeKind::triangular: return "triangular";
    case LatticeKind::honeycomb: return "honeycomb";
    case LatticeKind::custom: return "custom";
  }
  return "?";
}

const char* to_string(Boundary boundary) {
  return boundary == Boundary::open ? "open" : "periodic";
}

LatticeKind lattice_kind_from_string(const std::string& name) {
  if (name == "chain") return LatticeKind::chain;
  if (name == "square") return LatticeKind::square;
  if (name == "triangular") return LatticeKind::triangular;
  if (name == "honeycomb") return LatticeKind::honeycomb;
  if (name == "custom") return LatticeKind::custom;
  throw ValidationError("unknown lattice kind: " + name);
}

Boundary boundary_from_string(const std::string& name) {
  if (name == "open") return Boundary::open;
  if (name == "periodic") return Boundary::periodic;
  throw ValidationError("unknown boundary: " + name);
}

void Network::finish() {
  adjacency_.assign(static_cast<std::size_t>(node_count_), {});
  std::set<std::pair<NodeId, NodeId>> seen;
  for (int e = 0; e < edge_count(); ++e) {
    const Edge& edge = edges_[static_cast<std::size_t>(e)];
    if (edge.u < 0 || edge.u >= node_count_ || edge.v < 0 || edge.v >= node_count_) {
      throw ValidationError("edge endpoint out of range");
    }
    if (edge.u == edge.v) throw ValidationError("self-loops are not allowed");
    if (edge.copies.empty()) throw ValidationError("edge must carry at least one bond copy");
    auto key = std::minmax(edge.u, edge.v);
    if (!seen.insert(key).second) {
      throw ValidationError("duplicate edge; use bond copies for multiplicity");
    }
    adjacency_[static_cast<std::size_t>(edge.u)].push_back({edge.v, e});
    adjacency_[static_cast<std::size_t>(edge.v)].push_back({edge.u, e});
  }
}

Network build_lattice(const LatticeSpec& spec, const SchmidtVector& bond,
                      int copies_per_edge) {
  if (spec.length < 2) throw ValidationError("lattice size L must be >= 2");
  if (copies_per_edge < 1) throw ValidationError("copies_per_edge must be >= 1");

  const int L = spec.length;
  const bool periodic = spec.boundary == Boundary::periodic;

  switch (spec.kind) {
    case LatticeKind::chain:
      if (periodic) throw ValidationError("chain supports open boundary only");
      break;
    case LatticeKind::square:
      if (periodic && L < 3)
        throw ValidationError("periodic square needs L >= 3 (doubled edges at L=2)");
      break;
    case LatticeKind::triangular:
      if (!periodic) throw ValidationError("triangular lattice supports periodic boundary only");
      if (L < 3)
        throw ValidationError("periodic triangular needs L >= 3 (doubled edges at L=2)");
      break;
    case LatticeKind::honeycomb:
      if (!periodic) throw ValidationError("honeycomb lattice supports periodic boundary only");
      break;
    case LatticeKind::custom:
      throw ValidationError("custom networks are built from explicit edge lists");
  }

  Network net;
  net.spec_ = spec;

  std::vector<SchmidtVector> copies(static_cast<std::size_t>(copies_per_edge), bond);
  auto add_edge = [&](NodeId u, NodeId v, int dx, int dy) {
    net.edges_.push_back(Edge{u, v, {dx, dy}, copies});
  };

  if (spec.kind == LatticeKind::chain) {
    net.node_count_ = L;
    for (int i = 0; i < L; ++i) {
      net.coords_.push_back({static_cast<double>(i), 0.0});
      net.cells_.push_back({i, 0});
    }
    for (int i = 0; i + 1 < L; ++i) add_edge(i, i + 1, 1, 0);
  } else if (spec.kind == LatticeKind::square || spec.kind == LatticeKind::triangular) {
    net.node_count_ = L * L;
    auto id = [L](int x, int y) { return y * L + x; };
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x) {
        net.coords_.push_back({static_cast<double>(x), static_cast<double>(y)});
        net.cells_.push_back({x, y});
      }
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x) {
        if (periodic || x + 1 < L) add_edge(id(x, y), id((x + 1) % L, y), 1, 0);
        if (periodic || y + 1 < L) add_edge(id(x, y), id(x, (y + 1) % L), 0, 1);
        if (spec.kind == LatticeKind::triangular)
          add_edge(id(x, y), id((x + 1) % L, (y + 1) % L), 1, 1);
      }
  } else {  // honeycomb, periodic
    net.node_count_ = 2 * L * L;
    auto a_id = [L](int x, int y) { return 2 * (y * L + x); };
    auto b_id = [L](int x, int y) { return 2 * (y * L + x) + 1; };
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x) {
        // brick-wall embedding: A and B of a cell sit side by side
        net.coords_.push_back({2.0 * x, static_cast<double>(y)});
        net.coords_.push_back({2.0 * x + 1.0, static_cast<double>(y)});
        net.cells_.push_back({x, y});
        net.cells_.push_back({x, y});
        net.tags_.push_back(Sublattice::a);
        net.tags_.push_back(Sublattice::b);
      }
    const int wrap = L - 1;
    for (int y = 0; y < L; ++y)
      for (int x = 0; x < L; ++x) {
        add_edge(a_id(x, y), b_id(x, y), 0, 0);
        add_edge(a_id(x, y), b_id(x == 0 ? wrap : x - 1, y), -1, 0);
        add_edge(a_id(x, y), b_id(x, y == 0 ? wrap : y - 1), 0, -1);
      }
  }

  net.finish();
  return net;
}

Network custom_network(int nodes, std::vector<Edge> edges) {
  if (nodes < 1) throw ValidationError("network needs at least one node");
  Network net;
  net.spec_ = LatticeSpec{LatticeKind::custom, nodes, Boundary::open};
  net.node_count_ = nodes;
  net.edges_ = std::move(edges);
  net.finish();
  return net;
}

std::optional<int> graph_distance(const Network& net, NodeId a, NodeId b) {
  if (a < 0 || a >= net.node_count() || b < 0 || b >= net.node_count()) {
    throw ValidationError("node id out of range");
  }
  if (a == b) return 0;
  std::vector<int> dist(static_cast<std::size_t>(net.node_count()), -1);
  std::deque<NodeId> queue{a};
  dist[static_cast<std::size_t>(a)] = 0;
  while (!queue.empty()) {
    NodeId cur = queue.front();
    queue.pop_front();
    for (auto [next, edge] : net.neighbors(cur)) {
      (void)edge;
      if (dist[static_cast<std::size_t>(next)] >= 0) continue;
      dist[static_cast<std::size_t>(next)] = dist[static_cast<std::size_t>(cur)] + 1;
      if (next == b) return dist[static_cast<std::size_t>(next)];
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

TriangularTransform honeycomb_to_triangular(const Network& honeycomb) {
  if (honeycomb.spec().kind != LatticeKind::honeycomb) {
    throw ValidationError("transformation requires a honeycomb network");
  }
  const SchmidtVector& phi = honeycomb.edges().front().copies.front();
  if (phi.dim() != 2) throw DimensionError("honeycomb bonds must be qubit states");
  for (const Edge& e : honeycomb.edges()) {
    if (e.copies.size() != 2) {
      throw ValidationError("every edge must carry exactly two bond copies");
    }
    if (e.copies[0] != phi || e.copies[1] != phi) {
      throw ValidationError("heterogeneous bonds are not supported");
    }
  }

  const int L = honeycomb.spec().length;
  if (L < 3) {
    throw ValidationError("transformation needs L >= 3 (doubled edges at L=2)");
  }
  const double l2 = phi.lambda(1);
  // Any post-swap bond converts to a singlet with probability 2*l2; carry the
  // qubit state with that exact conversion probability.
  const SchmidtVector effective = SchmidtVector::qubit(1.0 - l2);

  Network tri;
  tri.spec_ = LatticeSpec{LatticeKind::triangular, L, Boundary::periodic};
  tri.node_count_ = L * L;
  auto id = [L](int x, int y) { return y * L + x; };
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x) {
      tri.coords_.push_back({static_cast<double>(x), static_cast<double>(y)});
      tri.cells_.push_back({x, y});
    }

  // Each A node at cell (x,y) touches B(x,y), B(x-1,y), B(x,y-1); the three
  // cyclic swaps consume both copies of each incident edge.
  const int wrap = L - 1;
  for (int y = 0; y < L; ++y)
    for (int x = 0; x < L; ++x) {
      const int xw = x == 0 ? wrap : x - 1;
      const int yw = y == 0 ? wrap : y - 1;
      tri.edges_.push_back(Edge{id(x, y), id(xw, y), {-1, 0}, {effective}});
      tri.edges_.push_back(Edge{id(xw, y), id(x, yw), {1, -1}, {effective}});
      tri.edges_.push_back(Edge{id(x, yw), id(x, y), {0, 1}, {effective}});
    }
  tri.finish();

  std::vector<double> edge_scp(tri.edges_.size(), scp(effective));
  return TriangularTransform{std::move(tri), std::move(edge_scp)};
}

std::string Network::to_json() const {
  nlohmann::json doc;
  doc["kind"] = to_string(spec_.kind);
  doc["L"] = spec_.length;
  doc["boundary"] = to_string(spec_.boundary);
  doc["nodes"] = node_count_;
  nlohmann::json edge_list = nlohmann::json::array();
  for (const Edge& e : edges_) {
    nlohmann::json states = nlohmann::json::array();
    for (const SchmidtVector& s : e.copies) states.push_back(s.coeffs());
    edge_list.push_back(nlohmann::json::array({e.u, e.v, states}));
  }
  doc["edges"] = std::move(edge_list);
  return doc.dump();
}

Network network_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  Network net;
  net.spec_.kind = lattice_kind_from_string(doc.at("kind").get<std::string>());
  net.spec_.length = doc.at("L").get<int>();
  net.spec_.boundary = boundary_from_string(doc.at("boundary").get<std::string>());
  net.node_count_ = doc.at("nodes").get<int>();
  for (const auto& row : doc.at("edges")) {
    Edge e;
    e.u = row.at(0).get<NodeId>();
    e.v = row.at(1).get<NodeId>();
    for (const auto& coeffs : row.at(2)) {
      e.copies.push_back(SchmidtVector(coeffs.get<std::vector<double>>()));
    }
    net.edges_.push_back(std::move(e));
  }
  net.finish();
  return net;
}

}  // namespace qperc
