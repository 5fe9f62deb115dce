#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cohft/errors.hpp"
#include "cohft/fusion.hpp"

namespace cohft {

// Dual graph of a stable curve. Vertices carry genus labels, legs are
// labeled 1..n and fixed by isomorphisms, edges are pairs of half-edges.
// Half-edge 2e sits at edges[e][0], half-edge 2e+1 at edges[e][1]; loops
// (edges[e][0] == edges[e][1]) and parallel edges are permitted.
struct StableGraph {
  std::vector<int> vertex_genus;
  std::vector<int> leg_vertex;             // index i holds the vertex of leg i+1
  std::vector<std::array<int, 2>> edges;

  int num_vertices() const { return static_cast<int>(vertex_genus.size()); }
  int num_legs() const { return static_cast<int>(leg_vertex.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_half_edges() const { return 2 * num_edges(); }
  int half_edge_vertex(int h) const { return edges[h / 2][h % 2]; }

  int first_betti() const { return num_edges() - num_vertices() + 1; }
  int genus() const;
  int vertex_valence(int v) const;  // legs + half-edges at v

  bool is_connected() const;
  // Empty when the graph is a valid stable graph; otherwise a description of
  // the first failed condition.
  std::optional<std::string> check_valid() const;

  static StableGraph smooth(int g, int n);

  bool operator==(const StableGraph& other) const = default;
};

// Permutation of half-edge ids (index old id -> new id).
using HalfEdgePerm = std::vector<int>;

// Result of canonicalization: the canonical presentation together with the
// vertex and half-edge relabeling that produced it.
struct CanonicalizedGraph {
  StableGraph graph;
  std::vector<int> vertex_map;  // old vertex -> canonical vertex
  HalfEdgePerm half_edge_map;   // old half-edge -> canonical half-edge
};

// Isomorphism-invariant encoding; equal for two graphs iff they are
// isomorphic by a leg-fixing isomorphism.
std::vector<std::int32_t> canonical_encoding(const StableGraph& graph);

// Byte-comparable form of the encoding.
std::string canonical_key(const StableGraph& graph);

CanonicalizedGraph canonicalize(const StableGraph& graph);

// All automorphisms (fixing legs pointwise) as half-edge permutations.
// Vertex moves are implied: an automorphism maps half-edges at v to
// half-edges at a common image vertex.
std::vector<HalfEdgePerm> halfedge_automorphisms(const StableGraph& graph);

std::uint64_t aut_order(const StableGraph& graph);

struct EnumeratedGraph {
  StableGraph graph;  // canonical presentation
  std::uint64_t aut = 1;
};

// One representative per isomorphism class of stable graphs of genus g with
// n legs, sorted by canonical key. max_edges >= 0 restricts to graphs with
// at most that many edges (used when a degree cut kills larger graphs).
// Throws StabilityError unless 2g - 2 + n > 0.
std::vector<EnumeratedGraph> enumerate_stable_graphs(int g, int n, int max_edges = -1);

// Module assignments mu: half-edges -> module indices with
// mu(2e+1) = dual(mu(2e)); exactly m^{#edges} of them, odometer order over
// edges. The callback receives the assignment vector (size num_half_edges).
void for_each_module_assignment(const StableGraph& graph, const FusionDatum& datum,
                                const std::function<void(const std::vector<int>&)>& fn);

std::vector<std::vector<int>> module_assignments(const StableGraph& graph, const FusionDatum& datum);

}  // namespace cohft
