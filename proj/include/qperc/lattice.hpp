#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qperc/schmidt.hpp"

namespace qperc {

using NodeId = int;

enum class LatticeKind { chain, square, triangular, honeycomb, custom };
enum class Boundary { open, periodic };
enum class Sublattice : signed char { none = -1, a = 0, b = 1 };

const char* to_string(LatticeKind kind);
const char* to_string(Boundary boundary);
LatticeKind lattice_kind_from_string(const std::string& name);
Boundary boundary_from_string(const std::string& name);

struct LatticeSpec {
  LatticeKind kind = LatticeKind::square;
  int length = 2;  // linear size L
  Boundary boundary = Boundary::periodic;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  // Geometric displacement of v's unit cell relative to u's, ignoring
  // periodic wrapping. Drives winding detection on tori.
  std::array<int, 2> shift{0, 0};
  std::vector<SchmidtVector> copies;
};

class Network;
struct TriangularTransform;

// Lattice network with every edge carrying copies_per_edge copies of bond.
// Supported combinations: chain (open), square (open or periodic), triangular
// (periodic), honeycomb (periodic). Periodic square and triangular lattices
// need L >= 3 to avoid doubled edges.
Network build_lattice(const LatticeSpec& spec, const SchmidtVector& bond,
                      int copies_per_edge = 1);

// Arbitrary graph from an explicit edge list; nodes are 0..nodes-1.
Network custom_network(int nodes, std::vector<Edge> edges);

// Parses the schema emitted by Network::to_json. Lattice metadata is kept but
// coordinates are not reconstructed; the result behaves like a custom network.
Network network_from_json(const std::string& text);

TriangularTransform honeycomb_to_triangular(const Network& honeycomb);

// Immutable graph of nodes joined by entangled bonds. Lattice networks carry
// unit-cell coordinates and (for honeycomb) sublattice tags; custom networks
// carry neither.
class Network {
 public:
  const LatticeSpec& spec() const { return spec_; }
  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  bool has_coords() const { return !cells_.empty(); }
  std::array<double, 2> coord(NodeId n) const { return coords_[static_cast<std::size_t>(n)]; }
  std::array<int, 2> cell(NodeId n) const { return cells_[static_cast<std::size_t>(n)]; }
  Sublattice sublattice(NodeId n) const {
    return tags_.empty() ? Sublattice::none : tags_[static_cast<std::size_t>(n)];
  }

  // (neighbor, edge index) pairs in edge construction order.
  const std::vector<std::pair<NodeId, int>>& neighbors(NodeId n) const {
    return adjacency_[static_cast<std::size_t>(n)];
  }
  int degree(NodeId n) const { return static_cast<int>(neighbors(n).size()); }

  std::string to_json() const;

  friend Network build_lattice(const LatticeSpec&, const SchmidtVector&, int);
  friend Network custom_network(int, std::vector<Edge>);
  friend Network network_from_json(const std::string&);
  friend TriangularTransform honeycomb_to_triangular(const Network&);

 private:
  Network() = default;
  void finish();  // validates edges, builds adjacency

  LatticeSpec spec_;
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::array<double, 2>> coords_;
  std::vector<std::array<int, 2>> cells_;
  std::vector<Sublattice> tags_;
  std::vector<std::vector<std::pair<NodeId, int>>> adjacency_;
};

// Breadth-first shortest path length in hops; nullopt if unreachable.
std::optional<int> graph_distance(const Network& net, NodeId a, NodeId b);

struct TriangularTransform {
  Network net;                  // triangular lattice on the B sublattice
  std::vector<double> edge_scp; // open probability of each new bond
};

// Entanglement swapping at every A node of a doubled-bond honeycomb lattice:
// each A node pairs its three incident edges cyclically, (e1,e2), (e2,e3),
// (e3,e1), consuming one bond copy from each edge per swap and leaving a new
// bond between the corresponding B neighbors. The result is a triangular
// lattice whose every bond converts to a singlet with the same probability
// 2*l2 as a single original bond; each new edge carries the states'
// Procrustean representative (1-l2, l2).
TriangularTransform honeycomb_to_triangular(const Network& honeycomb);

}  // namespace qperc
