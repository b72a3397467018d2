#pragma once
// n-ordinals (finite sets with n complementary antireflexive relations),
// their maps and fibers, domination, vertical suspension, and n-planar trees
// with insertion/contraction and the [sigma]-tree of an ordinal map.

#include <optional>
#include <string>
#include <vector>

namespace polymnd {

// Carrier is {0..k-1}. rel[a][b] = p >= 0 when a <_p b, else -1. Exactly one
// of rel[a][b], rel[b][a] is set for each pair of distinct elements.
struct NOrdinal {
  int n = 0;
  std::vector<std::vector<int>> rel;

  int size() const { return (int)rel.size(); }
  int level(int a, int b) const { return rel[a][b]; }
  bool less(int a, int b) const { return rel[a][b] >= 0; }  // total order a < b

  // canonical ordinal whose total order is 0 < 1 < ... < k-1, from the
  // adjacent-level vector (levels[i] relates i and i+1)
  static NOrdinal from_levels(int n, const std::vector<int>& levels);
  static NOrdinal initial(int n);
  static NOrdinal singleton(int n);  // the terminal n-ordinal U_n

  bool is_initial() const { return size() == 0; }
  bool is_terminal() const { return size() == 1; }
  bool regular() const { return size() >= 1; }
  bool normal() const { return size() >= 2; }

  // d(S): edges of the pruned level-tree representation minus (n-1)
  int dimension() const;

  std::string key() const;
};

struct OrdinalIssue {
  std::string what;
};

// empty iff complementarity + min-transitivity hold
std::vector<OrdinalIssue> validate_ordinal(const NOrdinal& o);

// permutation of the carrier sorting by the total order; o is valid
std::vector<int> total_order(const NOrdinal& o);

// the canonical (skeletal) representative: relabel carrier along total order
NOrdinal canonicalize(const NOrdinal& o, std::vector<int>* perm_out = nullptr);

struct OrdinalMap {
  const NOrdinal* src;
  const NOrdinal* dst;
  std::vector<int> f;  // f[a] in carrier of dst
};

struct MapClass {
  bool is_map = false;
  bool quasibijection = false;
  bool order_preserving = false;
  bool surjective = false;
  std::string violation;  // witness when not a map
};

MapClass classify_map(const NOrdinal& src, const NOrdinal& dst, const std::vector<int>& f);

// fibers in the total order of dst, each with the induced (canonicalized)
// ordinal; also returns the carrier elements of each fiber
struct Fiber {
  NOrdinal ordinal;           // canonical induced ordinal
  std::vector<int> elements;  // src elements, sorted by src total order
};
std::vector<Fiber> fibers(const NOrdinal& src, const NOrdinal& dst,
                          const std::vector<int>& f);

// S dominates X: identity on carriers is a map of n-ordered sets S -> X
bool dominates(const NOrdinal& S, const NOrdinal& X);

// vertical suspension S^k: relation <_m becomes <_{m-k} read in the result
NOrdinal suspend(const NOrdinal& T, int k);

// all ordinal structures with n levels on a carrier of size k, canonical
// total order (i < j as integers)
std::vector<NOrdinal> all_canonical_ordinals(int n, int k);
// all ordinal structures on {0..k-1} with arbitrary total order
std::vector<NOrdinal> all_ordinals(int n, int k);

// ---------- n-planar trees ----------

// Planar representative: children of each vertex listed in the vertex
// ordinal's total order; leaves carry labels 0..p-1; the leaf ordinal S is a
// structure on the labels.
struct NPlanarNode {
  bool leaf = false;
  int label = -1;               // for leaves
  NOrdinal ord;                 // for vertices: ordinal on the children
  std::vector<NPlanarNode> children;

  int count_leaves() const;
  int count_vertices() const;
  int count_edges() const;  // edges of the underlying rooted tree incl. root
};

struct NPlanarTree {
  int n = 0;
  NPlanarNode root;  // may be a leaf (the vertex-free unit tree)
  NOrdinal leaf_ordinal;

  int leaves() const { return root.count_leaves(); }
  int vertices() const { return root.count_vertices(); }
  int edges() const { return root.count_edges(); }
  std::string key() const;
};

std::vector<OrdinalIssue> validate_nplanar(const NPlanarTree& t);

// induced n-ordered set on leaf labels via the upmost-common-vertex rule
NOrdinal leaf_order(const NPlanarTree& t);

// corolla on T: single vertex decorated by T, leaves labelled in T's total
// order, leaf ordinal T itself
NPlanarTree corolla_tree(const NOrdinal& T);
// the vertex-free unit tree (single edge); leaf ordinal = singleton
NPlanarTree unit_tree(int n);

// insertion of t2 into vertex #v (preorder index over vertices) of t; the
// bijection between t2's leaves and the vertex's inputs is induced by the
// total orders and must be an isomorphism of ordinals.
NPlanarTree insert_nplanar(const NPlanarTree& t, int v, const NPlanarTree& t2);

// [sigma] for a map of ordinals: two-level tree, bottom vertex dst, upper
// vertices the fibers. normal variant omits singleton fibers.
NPlanarTree sigma_tree(const NOrdinal& src, const NOrdinal& dst,
                       const std::vector<int>& f, bool normal_variant);

// enumerate vertices in preorder; returns each vertex's ordinal
std::vector<const NPlanarNode*> tree_vertices(const NPlanarTree& t);

// getzler-jones dimension sum over vertex ordinals
int tree_dimension(const NPlanarTree& t);

std::string ordinal_to_json(const NOrdinal& o);
NOrdinal ordinal_from_json(const std::string& s);

}  // namespace polymnd
