#pragma once
// Graph calculus: graphs with vertices/flags/edges, validation against the
// incidence axioms, structural classification, insertion (vertex replacement),
// contraction of plain subtrees, canonical forms, isomorphism and
// automorphisms, plus the ordered / directed / rooted / planar refinements.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polymnd {

// Candidate incidence data before the axioms are known to hold. Edges may
// carry any number of flag slots here; validate() reports the violations.
struct RawGraph {
  int nv = 0;
  int nf = 0;
  std::vector<int> flag_vertex;            // per flag: vertex id or -1
  std::vector<std::vector<int>> edge_flags;  // per edge: flag slots (multiset)
};

struct Violation {
  std::string axiom;  // "i", "ii", "iii", "range"
  std::string detail;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate(const RawGraph& raw);

// A graph satisfying the axioms. Every edge has exactly two flag slots; a
// slot pair {f,f} is a free-living-loop flag.
struct Graph {
  int nv = 0;
  std::vector<int> flag_vertex;              // per flag: vertex id or -1
  std::vector<std::array<int, 2>> edges;     // per edge: two flag slots

  int nf() const { return (int)flag_vertex.size(); }
  int ne() const { return (int)edges.size(); }
  int nflags() const { return nf(); }

  bool is_loop_edge(int e) const { return edges[e][0] == edges[e][1]; }
  // Edge containing the given flag (each flag lies on exactly one edge).
  int edge_of(int f) const;
  int adjacent_flag(int f) const;  // the other slot on its edge (may equal f)
  bool flag_free(int f) const { return flag_vertex[f] < 0 && !flag_is_loop(f); }
  bool flag_is_loop(int f) const;
  bool edge_internal(int e) const;
  std::vector<int> vertex_flags(int v) const;
  std::vector<int> free_flags() const;

  RawGraph raw() const;
};

// Build a Graph from raw data; throws if invalid.
Graph make_graph(const RawGraph& raw);

struct GraphClass {
  bool connected = false;
  bool tree = false;
  bool forest = false;
  bool corolla = false;
  bool free_living_edge = false;
  bool free_living_loop = false;
  bool pointed_loop = false;
  int linear_tree = -1;   // n if g is L_n, else -1
  int linear_graph = -1;  // n if g is [1,n], else -1
};

GraphClass classify(const Graph& g);

// Insertion of g2 into vertex v of g along rho. rho lists, for each free flag
// of g2 (in ascending flag id), the v-flag of g it is glued to.
// Returns the result together with the vertex/flag embedding of g2.
struct InsertResult {
  Graph graph;
  std::vector<int> g2_vertex_image;  // vertex of result for each g2 vertex
  std::vector<int> g_vertex_image;   // vertex of result for each g vertex (-1 for v)
};

InsertResult insert(const Graph& g, int v, const Graph& g2,
                    const std::vector<int>& rho);

// Contraction of a plain subtree (given by its vertex set) to a single
// vertex. Returns the contracted graph, the id of the new vertex, and the
// contraction function C : external edges of g -> external edges of sub
// computed by the unique-path construction.
struct ContractResult {
  Graph graph;
  int new_vertex = -1;
  Graph sub;                       // the extracted plain subtree
  std::vector<int> sub_vertices;   // g vertices forming the subtree
  std::vector<int> c_map;          // per external edge of g: external edge of sub
  std::vector<int> external_edges_g;    // external edge ids of g (domain order)
  std::vector<int> external_edges_sub;  // external edge ids of sub (codomain)
  std::vector<int> new_vertex_flag_for_sub_external;  // per sub external edge: flag of new vertex
};

ContractResult contract(const Graph& g, const std::vector<int>& sub_vertices);

// Canonical form: a string key equal for two graphs iff they are isomorphic.
// Exhaustive search with invariant pruning; intended for small graphs.
std::string canonical_form(const Graph& g);
std::optional<std::pair<std::vector<int>, std::vector<int>>> iso(
    const Graph& a, const Graph& b);  // (vertex map, flag map)
// All automorphisms as (vertex map, flag map) pairs.
std::vector<std::pair<std::vector<int>, std::vector<int>>> automorphisms(
    const Graph& g);

// Ordered refinement: linear order on free flags and on each vertex's flags.
struct OrderedGraph {
  Graph g;
  std::vector<int> free_order;                // free flag ids in order
  std::vector<std::vector<int>> vertex_order; // per vertex: its flag ids in order

  bool valid() const;
};

// Ordered insertion: rho induced by the linear orders.
OrderedGraph insert_ordered(const OrderedGraph& g, int v, const OrderedGraph& g2);

// Insertion with the vertex images exposed (for fiber tracking).
struct OrderedInsert {
  OrderedGraph og;
  std::vector<int> g_vertex_image;   // host vertices (-1 for the replaced one)
  std::vector<int> g2_vertex_image;  // inserted graph's vertices
  std::vector<int> g_edge_image;     // host edge -> result edge (-1 if gone)
  std::vector<int> g2_edge_image;    // g2 edge -> result edge (-1 if stripped)
};
OrderedInsert insert_ordered_ex(const OrderedGraph& g, int v, const OrderedGraph& g2);

std::string canonical_form(const OrderedGraph& g);

// Deterministic relabelling to a canonical representative: isomorphic ordered
// (optionally directed) graphs relabel to identical structures.
struct OrderedCanon {
  OrderedGraph og;
  std::vector<int> orient;  // per new edge: source slot (when input given)
  std::vector<int> vmap;    // old vertex -> new vertex
  std::vector<int> fmap;    // old flag -> new flag
  std::string key;
};
OrderedCanon canonical_relabel(const OrderedGraph& g, const std::vector<int>* orient);

// Directed refinement: per edge a chosen slot (0 or 1); the flag in the
// chosen slot is the source end of the edge.
struct DirectedGraph {
  Graph g;
  std::vector<int> orientation;  // per edge: 0 or 1, index of the out slot

  bool flag_outgoing(int f) const;
  bool has_directed_loop() const;
};

std::string canonical_form(const DirectedGraph& g, const OrderedGraph& og);

// Enumeration of all valid graphs with at most max_flags flags, up to iso.
std::vector<Graph> enumerate_graphs(int max_flags);
// All ordered structures on g, up to ordered isomorphism.
std::vector<OrderedGraph> ordered_structures(const Graph& g);

// JSON / DOT per the documented encodings.
std::string graph_to_json(const OrderedGraph& g, const std::vector<int>* orient);
OrderedGraph graph_from_json(const std::string& text);
std::string graph_to_dot(const Graph& g);

}  // namespace polymnd
