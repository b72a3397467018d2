// Planar-rooted-tree monads: non-symmetric operads O(1) and the symmetric
// operad family (general / reduced / constant-free / normal), whose
// operations are planar rooted trees, resp. leaf-labelled planar rooted
// trees, with multiplication given by insertion.

#include <algorithm>
#include <deque>
#include <mutex>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "polymnd/monad.hpp"

namespace polymnd {

namespace {

struct PT {
  bool leaf = false;
  int label = -1;  // leaf label (SymOp); -1 when unlabelled
  std::vector<PT> ch;

  int leaves() const {
    if (leaf) return 1;
    int s = 0;
    for (auto& c : ch) s += c.leaves();
    return s;
  }
  int vertices() const {
    if (leaf) return 0;
    int s = 1;
    for (auto& c : ch) s += c.vertices();
    return s;
  }
  int edges() const {
    int s = 1;
    for (auto& c : ch) s += c.edges();
    return s;
  }
};

std::string pt_key(const PT& t) {
  if (t.leaf) return t.label >= 0 ? "l" + std::to_string(t.label) : "l";
  std::string s = "(";
  for (auto& c : t.ch) s += pt_key(c);
  return s + ")";
}

// planar trees with exactly e edges; labelled = give leaves labels later
void gen_shapes(int e, int min_arity, bool allow_stumps,
                std::vector<PT>& out) {
  // shapes: leaf (e == 1) or a root vertex with children of total e-1 edges
  if (e == 1) {
    PT t;
    t.leaf = true;
    out.push_back(t);
    // the 0-ary vertex (stump) also has one edge
  }
  // root vertex with k children, each subtree >= 1 edge
  std::vector<std::vector<PT>> by_size(e);
  for (int s = 1; s < e; ++s) gen_shapes(s, min_arity, allow_stumps, by_size[s]);
  std::vector<PT> cur;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      int k = (int)cur.size();
      if (k >= min_arity || (k == 0 && allow_stumps)) {
        PT t;
        t.leaf = false;
        t.ch = cur;
        out.push_back(t);
      }
      return;
    }
    for (int s = 1; s <= left; ++s)
      for (auto& c : by_size[s]) {
        cur.push_back(c);
        rec(left - s);
        cur.pop_back();
      }
  };
  rec(e - 1);
}

void assign_labels(PT& t, const std::vector<int>& labels, int& idx) {
  if (t.leaf) {
    t.label = labels[idx++];
    return;
  }
  for (auto& c : t.ch) assign_labels(c, labels, idx);
}

// graft: substitute all slot vertices at once. slots = vertices in preorder
// satisfying `is_slot`. args indexed by slot order. Each arg's leaf labelled
// j receives the host vertex's child subtree number j. Vertices of the result
// are tagged with their origin.
struct TaggedPT {
  bool leaf = false;
  int label = -1;
  std::pair<int, int> org{-1, -1};
  std::vector<TaggedPT> ch;
};

TaggedPT graft_all(const PT& host, const std::vector<PT>& args,
                   const std::function<bool(const PT&)>& is_slot, int& slot_idx,
                   const std::vector<std::vector<int>>& arg_vertex_counter_unused) {
  (void)arg_vertex_counter_unused;
  if (host.leaf) {
    TaggedPT t;
    t.leaf = true;
    t.label = host.label;
    return t;
  }
  std::vector<TaggedPT> kids;
  int my_slot = -1;
  if (is_slot(host)) my_slot = slot_idx++;
  for (auto& c : host.ch)
    kids.push_back(graft_all(c, args, is_slot, slot_idx, arg_vertex_counter_unused));
  if (my_slot < 0) {
    TaggedPT t;
    t.leaf = false;
    t.org = {-1, -1};
    t.ch = std::move(kids);
    return t;
  }
  // replace this vertex by args[my_slot], plugging kids at its leaves
  const PT& a = args[my_slot];
  int vtx_in_arg = 0;
  std::function<TaggedPT(const PT&)> emit = [&](const PT& nd) -> TaggedPT {
    if (nd.leaf) {
      int j = nd.label >= 0 ? nd.label : 0;
      return kids.at(j);
    }
    TaggedPT t;
    t.leaf = false;
    if (is_slot(nd)) t.org = {my_slot, vtx_in_arg++};
    else {
      t.org = {my_slot, -1};  // non-slot vertex inside the argument
      // non-slot vertices carry no origin; keep arg index for bookkeeping
    }
    for (auto& c : nd.ch) t.ch.push_back(emit(c));
    return t;
  };
  return emit(a);
}

void collect_origins(const TaggedPT& t, std::vector<std::pair<int, int>>& out,
                     const std::function<bool(int)>& arity_is_slot, PT& plain) {
  plain.leaf = t.leaf;
  plain.label = t.label;
  plain.ch.clear();
  if (t.leaf) return;
  if (arity_is_slot((int)t.ch.size())) out.push_back(t.org);
  plain.ch.resize(t.ch.size());
  for (size_t i = 0; i < t.ch.size(); ++i)
    collect_origins(t.ch[i], out, arity_is_slot, plain.ch[i]);
}

// Generic planar-tree monad; labelled = symop family, unlabelled = O(1).
class TreeMonad final : public PolynomialMonad {
 public:
  // variant: general / reduced / constant-free / normal; labelled leaves?
  TreeMonad(std::string name, bool labelled, std::string variant)
      : name_(std::move(name)), labelled_(labelled), variant_(std::move(variant)) {}

  std::string name() const override { return name_; }

  int min_vertex_arity() const {
    if (variant_ == "constant-free") return 1;
    if (variant_ == "normal") return 2;
    return 0;
  }
  bool tree_allowed(const PT& t) const {
    if (variant_ == "reduced" && t.leaves() == 0) return false;
    if (variant_ == "normal" && t.vertices() == 0) return false;
    bool ok = true;
    std::function<void(const PT&)> rec = [&](const PT& nd) {
      if (nd.leaf) return;
      if ((int)nd.ch.size() < min_vertex_arity() &&
          !(variant_ == "reduced" && nd.ch.empty()))
        ok = false;
      for (auto& c : nd.ch) rec(c);
    };
    rec(t);
    return ok;
  }
  // slot vertices: reduced variant freezes stumps
  bool vertex_is_slot(int arity) const {
    if (variant_ == "reduced") return arity >= 1;
    return true;
  }

  std::string colour_of(OpId b) override { return std::to_string(tree(b).leaves()); }
  std::vector<std::string> sources(OpId b) override {
    std::vector<std::string> out;
    std::function<void(const PT&)> rec = [&](const PT& nd) {
      if (nd.leaf) return;
      if (vertex_is_slot((int)nd.ch.size()))
        out.push_back(std::to_string(nd.ch.size()));
      for (auto& c : nd.ch) rec(c);
    };
    rec(tree(b));
    return out;
  }
  int size(OpId b) override { return tree(b).edges(); }
  bool is_unit(OpId b) override {
    const PT& t = tree(b);
    if (t.leaf) return false;
    for (size_t i = 0; i < t.ch.size(); ++i)
      if (!t.ch[i].leaf || (labelled_ && t.ch[i].label != (int)i)) return false;
    return true;
  }
  OpId unit(const std::string& colour) override {
    int k = std::stoi(colour);
    if (k < min_vertex_arity() && !(variant_ == "reduced" && k == 0))
      throw std::invalid_argument(name_ + ": no unit for colour " + colour);
    if (variant_ == "reduced" && k == 0)
      throw std::invalid_argument(name_ + ": no unit for colour 0");
    PT t;
    t.leaf = false;
    for (int i = 0; i < k; ++i) {
      PT l;
      l.leaf = true;
      if (labelled_) l.label = i;
      t.ch.push_back(l);
    }
    return intern(t);
  }
  SubstResult substitute(OpId b, const std::vector<OpId>& args) override {
    const PT host = tree(b);
    std::vector<PT> argts;
    for (OpId a : args) argts.push_back(tree(a));
    {
      auto srcs = sources(b);
      if (srcs.size() != args.size())
        throw std::invalid_argument(name_ + ": arity mismatch");
      for (size_t i = 0; i < args.size(); ++i)
        if (colour_of(args[i]) != srcs[i])
          throw std::invalid_argument(name_ + ": colour mismatch");
    }
    // unlabelled trees: graft by planar position; assign temp labels
    if (!labelled_) {
      for (auto& a : argts) {
        int idx = 0;
        std::vector<int> labs(a.leaves());
        std::iota(labs.begin(), labs.end(), 0);
        assign_labels(a, labs, idx);
      }
    }
    int slot_idx = 0;
    auto is_slot = [&](const PT& nd) { return vertex_is_slot((int)nd.ch.size()); };
    TaggedPT tagged = graft_all(host, argts, is_slot, slot_idx, {});
    SubstResult r;
    PT plain;
    collect_origins(tagged, r.slot_origin,
                    [&](int ar) { return vertex_is_slot(ar); }, plain);
    if (!labelled_) {
      std::function<void(PT&)> strip = [&](PT& nd) {
        if (nd.leaf) {
          nd.label = -1;
          return;
        }
        for (auto& c : nd.ch) strip(c);
      };
      strip(plain);
    }
    r.op = intern(plain);
    return r;
  }
  std::vector<OpId> enumerate(int max_size) override {
    std::vector<OpId> out;
    for (int e = 1; e <= max_size; ++e) {
      std::vector<PT> shapes;
      gen_shapes(e, min_vertex_arity(),
                 variant_ == "general" || variant_ == "reduced", shapes);
      for (auto& s : shapes) {
        if (!tree_allowed(s)) continue;
        if (!labelled_) {
          out.push_back(intern(s));
        } else {
          int p = s.leaves();
          std::vector<int> labs(p);
          std::iota(labs.begin(), labs.end(), 0);
          do {
            PT t = s;
            int idx = 0;
            assign_labels(t, labs, idx);
            out.push_back(intern(t));
          } while (std::next_permutation(labs.begin(), labs.end()));
        }
      }
    }
    return out;
  }
  std::string op_key(OpId b) override { return pt_key(tree(b)); }
  std::vector<std::pair<int, int>> slot_adjacency(OpId b) override {
    // slot indices in preorder; adjacency = parent-child vertex pairs
    std::vector<std::pair<int, int>> out;
    int idx = 0;
    std::function<int(const PT&)> rec = [&](const PT& nd) -> int {
      if (nd.leaf) return -1;
      int me = vertex_is_slot((int)nd.ch.size()) ? idx++ : -1;
      for (auto& c : nd.ch) {
        int child = rec(c);
        if (me >= 0 && child >= 0) out.push_back({me, child});
      }
      return me;
    };
    rec(tree(b));
    return out;
  }
  bool has_nullary_ops() const override { return variant_ != "normal"; }
  bool has_size_preserving_subs() const override { return labelled_; }

  const PT& tree(OpId b) const { return store_.at(b); }
  OpId intern(const PT& t) {
    auto key = pt_key(t);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    OpId id = (OpId)store_.size();
    store_.push_back(t);
    index_[key] = id;
    return id;
  }

 private:
  std::string name_;
  bool labelled_;
  std::string variant_;
  mutable std::mutex mu_;
  std::deque<PT> store_;
  std::map<std::string, OpId> index_;
};

}  // namespace

MonadPtr make_nsoperad() {
  return std::make_shared<TreeMonad>("nsoperads", false, "general");
}

MonadPtr make_symop(const std::string& variant) {
  std::string nm = variant == "general" ? "symop" : "symop-" + variant;
  return std::make_shared<TreeMonad>(nm, true, variant);
}

}  // namespace polymnd
