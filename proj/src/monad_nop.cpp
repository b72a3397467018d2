// Higher-operad monads O(n), NO(n), CFO(n), RO(n): operations are n-planar
// trees of the respective class with multiplication by tree insertion.

#include <algorithm>
#include <deque>
#include <mutex>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "polymnd/monad.hpp"
#include "polymnd/ordinal.hpp"

namespace polymnd {

namespace {

// canonical representative: relabel so the leaf ordinal's total order is the
// standard order on {0..p-1}
NPlanarTree canonical_nplanar(const NPlanarTree& t) {
  std::vector<int> perm;
  NOrdinal S = canonicalize(t.leaf_ordinal, &perm);
  // perm[i] = old label at new position i; new label of old label l:
  std::vector<int> newlab(perm.size());
  for (int i = 0; i < (int)perm.size(); ++i) newlab[perm[i]] = i;
  NPlanarTree out;
  out.n = t.n;
  out.leaf_ordinal = S;
  std::function<NPlanarNode(const NPlanarNode&)> rec =
      [&](const NPlanarNode& nd) -> NPlanarNode {
    NPlanarNode o;
    o.leaf = nd.leaf;
    o.ord = nd.ord;
    if (nd.leaf) o.label = newlab.at(nd.label);
    for (auto& c : nd.children) o.children.push_back(rec(c));
    return o;
  };
  out.root = rec(t.root);
  return out;
}

class NopMonad final : public PolynomialMonad {
 public:
  NopMonad(std::string family, int n) : family_(std::move(family)), n_(n) {}

  std::string name() const override {
    if (family_ == "general") return "O(" + std::to_string(n_) + ")";
    if (family_ == "normal") return "NO(" + std::to_string(n_) + ")";
    if (family_ == "constant-free") return "CFO(" + std::to_string(n_) + ")";
    return "RO(" + std::to_string(n_) + ")";
  }

  bool ordinal_allowed_as_vertex(const NOrdinal& o) const {
    if (family_ == "normal") return o.normal();
    if (family_ == "constant-free") return o.regular();
    return true;  // general, reduced allow everything (reduced freezes stumps)
  }
  bool colour_allowed(const NOrdinal& o) const {
    if (family_ == "normal") return o.normal();
    if (family_ == "constant-free" || family_ == "reduced") return o.regular();
    return true;
  }
  bool vertex_is_slot(const NOrdinal& o) const {
    if (family_ == "reduced") return o.regular();
    return true;
  }
  bool tree_allowed(const NPlanarTree& t) const {
    if (family_ == "normal" && t.vertices() == 0) return false;
    if (family_ == "reduced" && t.leaves() == 0) return false;
    if (!colour_allowed(t.leaf_ordinal)) return false;
    for (auto* v : tree_vertices(t))
      if (!ordinal_allowed_as_vertex(v->ord)) return false;
    return true;
  }

  std::string colour_of(OpId b) override {
    return canonicalize(tree(b).leaf_ordinal).key();
  }
  std::vector<std::string> sources(OpId b) override {
    std::vector<std::string> out;
    for (auto* v : tree_vertices(tree(b)))
      if (vertex_is_slot(v->ord)) out.push_back(v->ord.key());
    return out;
  }
  int size(OpId b) override { return tree(b).edges(); }
  bool is_unit(OpId b) override {
    const NPlanarTree& t = tree(b);
    if (t.root.leaf) return false;
    for (size_t i = 0; i < t.root.children.size(); ++i)
      if (!t.root.children[i].leaf || t.root.children[i].label != (int)i) return false;
    // unit corolla: leaf ordinal equals the vertex ordinal
    return t.leaf_ordinal.key() == t.root.ord.key();
  }
  OpId unit(const std::string& colour) override {
    NOrdinal T = ordinal_of_key(colour);
    if (!colour_allowed(T))
      throw std::invalid_argument(name() + ": no unit for colour " + colour);
    return intern(corolla_tree(T));
  }
  SubstResult substitute(OpId b, const std::vector<OpId>& args) override {
    auto srcs = sources(b);
    if (srcs.size() != args.size())
      throw std::invalid_argument(name() + ": arity mismatch");
    for (size_t i = 0; i < args.size(); ++i)
      if (colour_of(args[i]) != srcs[i])
        throw std::invalid_argument(name() + ": colour mismatch");
    const NPlanarTree& host = tree(b);
    // graft all slots simultaneously; slots indexed in preorder over slot
    // vertices; arg's leaf labelled j receives the host vertex's child j
    int slot_idx = 0;
    struct Tagged {
      NPlanarNode node;
      std::vector<std::pair<int, int>> origins;  // preorder over slot vertices
    };
    std::function<Tagged(const NPlanarNode&)> rec =
        [&](const NPlanarNode& nd) -> Tagged {
      if (nd.leaf) return {nd, {}};
      int my_slot = vertex_is_slot(nd.ord) ? slot_idx++ : -1;
      std::vector<Tagged> kids;
      for (auto& c : nd.children) kids.push_back(rec(c));
      if (my_slot < 0) {
        Tagged t;
        t.node.leaf = false;
        t.node.ord = nd.ord;
        for (auto& k : kids) {
          t.origins.insert(t.origins.end(), k.origins.begin(), k.origins.end());
          t.node.children.push_back(k.node);
        }
        // frozen vertex contributes no origin but sits before its children
        std::vector<std::pair<int, int>> mine;
        mine.insert(mine.end(), t.origins.begin(), t.origins.end());
        t.origins = mine;
        return t;
      }
      const NPlanarTree& a = tree(args[my_slot]);
      int vtx_in_arg = 0;
      std::function<Tagged(const NPlanarNode&)> emit =
          [&](const NPlanarNode& an) -> Tagged {
        if (an.leaf) return kids.at(an.label);
        Tagged t;
        t.node.leaf = false;
        t.node.ord = an.ord;
        int arg_slot = vertex_is_slot(an.ord) ? vtx_in_arg++ : -1;
        if (arg_slot >= 0) t.origins.push_back({my_slot, arg_slot});
        for (auto& c : an.children) {
          Tagged k = emit(c);
          t.origins.insert(t.origins.end(), k.origins.begin(), k.origins.end());
          t.node.children.push_back(k.node);
        }
        return t;
      };
      return emit(a.root);
    };
    Tagged res = rec(host.root);
    NPlanarTree out;
    out.n = n_;
    out.root = res.node;
    out.leaf_ordinal = host.leaf_ordinal;
    SubstResult r;
    r.op = intern(out);
    r.slot_origin = res.origins;
    return r;
  }
  std::vector<OpId> enumerate(int max_size) override {
    auto it = enum_cache_.find(max_size);
    if (it != enum_cache_.end()) return it->second;
    std::vector<OpId> out;
    for (int e = 1; e <= max_size; ++e)
      for (auto& shape : shapes(e)) {
        // all leaf data: canonical S + labelling with S dominating L
        int p = shape.root.count_leaves();
        std::vector<int> labs(p);
        std::iota(labs.begin(), labs.end(), 0);
        std::vector<NOrdinal> esses = all_canonical_ordinals(n_, p);
        do {
          NPlanarTree t = shape;
          int idx = 0;
          std::function<void(NPlanarNode&)> put = [&](NPlanarNode& nd) {
            if (nd.leaf) {
              nd.label = labs[idx++];
              return;
            }
            for (auto& c : nd.children) put(c);
          };
          put(t.root);
          NOrdinal L = [&] {
            NPlanarTree tmp = t;
            tmp.leaf_ordinal = NOrdinal::from_levels(n_, std::vector<int>(std::max(0, p - 1), 0));
            return leaf_order(tmp);
          }();
          for (auto& S : esses) {
            if (!colour_allowed(S)) continue;
            // S dominates L?
            NPlanarTree cand = t;
            cand.leaf_ordinal = S;
            bool ok = true;
            if (p > 0) {
              try {
                ok = dominates(S, L);
              } catch (...) {
                ok = false;
              }
            }
            if (!ok) continue;
            if (!tree_allowed(cand)) continue;
            out.push_back(intern(cand));
          }
        } while (std::next_permutation(labs.begin(), labs.end()));
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    enum_cache_[max_size] = out;
    return out;
  }
  std::string op_key(OpId b) override { return tree(b).key(); }
  long long op_dimension(OpId b) override { return tree_dimension(tree(b)); }
  std::vector<std::pair<int, int>> slot_adjacency(OpId b) override {
    std::vector<std::pair<int, int>> out;
    int idx = 0;
    std::function<int(const NPlanarNode&)> rec = [&](const NPlanarNode& nd) -> int {
      if (nd.leaf) return -1;
      int me = vertex_is_slot(nd.ord) ? idx++ : -1;
      for (auto& c : nd.children) {
        int child = rec(c);
        if (me >= 0 && child >= 0) out.push_back({me, child});
      }
      return me;
    };
    rec(tree(b).root);
    return out;
  }
  bool has_nullary_ops() const override { return family_ != "normal"; }
  bool has_size_preserving_subs() const override { return n_ >= 2; }

  const NPlanarTree& tree(OpId b) const { return store_.at(b); }
  OpId intern(const NPlanarTree& t0) {
    NPlanarTree t = canonical_nplanar(t0);
    auto key = t.key();
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    OpId id = (OpId)store_.size();
    store_.push_back(t);
    index_[key] = id;
    ordinal_by_key_[canonicalize(t.leaf_ordinal).key()] = canonicalize(t.leaf_ordinal);
    for (auto* v : tree_vertices(t)) ordinal_by_key_[v->ord.key()] = v->ord;
    return id;
  }
  NOrdinal ordinal_of_key(const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ordinal_by_key_.find(key);
    if (it != ordinal_by_key_.end()) return it->second;
    // parse is avoided: pre-populate from small ordinals
    for (int k = 0; k <= 8; ++k)
      for (auto& o : all_canonical_ordinals(n_, k)) {
        ordinal_by_key_[o.key()] = o;
        if (o.key() == key) return o;
      }
    throw std::invalid_argument(name() + ": unknown colour " + key);
  }

 private:
  // undecorated-but-shaped trees with vertex ordinals, no leaf data
  std::vector<NPlanarTree> shapes(int e) {
    auto it = shape_cache_.find(e);
    if (it != shape_cache_.end()) return it->second;
    std::vector<NPlanarTree> out;
    // recursive generation over nodes with exact edge counts
    std::function<std::vector<NPlanarNode>(int)> gen = [&](int edges) {
      std::vector<NPlanarNode> res;
      if (edges <= 0) return res;
      if (edges == 1) {
        NPlanarNode lf;
        lf.leaf = true;
        lf.label = -1;
        res.push_back(lf);
      }
      // vertex with k children totalling edges-1
      std::vector<std::vector<NPlanarNode>> by(edges);
      for (int s = 1; s < edges; ++s) by[s] = gen(s);
      std::vector<NPlanarNode> cur;
      std::function<void(int)> rec2 = [&](int left) {
        if (left == 0) {
          int k = (int)cur.size();
          for (auto& o : all_canonical_ordinals(n_, k)) {
            if (!ordinal_allowed_as_vertex(o)) continue;
            NPlanarNode v;
            v.leaf = false;
            v.ord = o;
            v.children = cur;
            res.push_back(v);
          }
          return;
        }
        for (int s = 1; s <= left; ++s)
          for (auto& c : by[s]) {
            cur.push_back(c);
            rec2(left - s);
            cur.pop_back();
          }
      };
      rec2(edges - 1);
      return res;
    };
    for (auto& nd : gen(e)) {
      NPlanarTree t;
      t.n = n_;
      t.root = nd;
      out.push_back(t);
    }
    shape_cache_[e] = out;
    return out;
  }

  std::string family_;
  int n_;
  mutable std::mutex mu_;
  std::deque<NPlanarTree> store_;
  std::map<std::string, OpId> index_;
  std::map<std::string, NOrdinal> ordinal_by_key_;
  std::map<int, std::vector<NPlanarTree>> shape_cache_;
  std::map<int, std::vector<OpId>> enum_cache_;
};

}  // namespace

MonadPtr make_nop(const std::string& family, int n) {
  return std::make_shared<NopMonad>(family, n);
}

}  // namespace polymnd
