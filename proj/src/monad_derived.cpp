// Derived monads: T+1, T+2, T_f, T_g, T_{f,g} (colour set doubled/tripled,
// unit corollas of the listed types added), and the Baez-Dolan plus
// construction whose operations are decorated rooted trees.

#include <algorithm>
#include <deque>
#include <mutex>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "polymnd/monad.hpp"

namespace polymnd {

namespace {

// ---------- T+1 / T+2 / T_f / T_g / T_{f,g} ----------

class DerivedMonad final : public PolynomialMonad {
 public:
  DerivedMonad(MonadPtr base, Derived which) : base_(std::move(base)), which_(which) {}

  bool has_L() const { return which_ != Derived::TPlus1; }
  bool has_f() const { return which_ == Derived::Tf || which_ == Derived::Tfg; }
  bool has_g() const { return which_ == Derived::Tg || which_ == Derived::Tfg; }
  bool mixed_allowed() const { return has_g(); }

  std::string name() const override {
    std::string b = base_->name();
    switch (which_) {
      case Derived::TPlus1: return b + "+1";
      case Derived::TPlus2: return b + "+2";
      case Derived::Tf: return b + "_f";
      case Derived::Tg: return b + "_g";
      default: return b + "_fg";
    }
  }

  struct Op {
    char kind;  // 'm' mixed/base op (colouring over {X,K}), 'k','l' units, 'f'
    OpId base = -1;                // for 'm'
    std::vector<char> colouring;   // per base slot: 'X' or 'K'
    std::string colour;            // for 'k','l','f': the base colour
  };

  std::string colour_of(OpId b) override {
    const Op& o = op(b);
    if (o.kind == 'm') return tag_colour(base_->colour_of(o.base), 'X');
    if (o.kind == 'k') return tag_colour(o.colour, 'K');
    return tag_colour(o.colour, 'L');  // 'l' and 'f' target L
  }
  std::vector<std::string> sources(OpId b) override {
    const Op& o = op(b);
    if (o.kind == 'm') {
      auto ss = base_->sources(o.base);
      std::vector<std::string> out;
      for (size_t i = 0; i < ss.size(); ++i)
        out.push_back(tag_colour(ss[i], o.colouring[i]));
      return out;
    }
    if (o.kind == 'k') return {tag_colour(o.colour, 'K')};
    if (o.kind == 'l') return {tag_colour(o.colour, 'L')};
    return {tag_colour(o.colour, 'K')};  // f : K -> L
  }
  int size(OpId b) override {
    const Op& o = op(b);
    if (o.kind == 'm') return base_->size(o.base);
    return base_->size(base_->unit(o.colour));
  }
  bool is_unit(OpId b) override {
    const Op& o = op(b);
    if (o.kind == 'k' || o.kind == 'l') return true;
    if (o.kind == 'f') return false;
    if (!base_->is_unit(o.base)) return false;
    for (char c : o.colouring)
      if (c != 'X') return false;
    return true;
  }
  OpId unit(const std::string& colour) override {
    char tag = colour.empty() ? '?' : colour[0];
    std::string c = colour.size() > 2 ? colour.substr(2) : "";
    if (tag == 'X') {
      Op o;
      o.kind = 'm';
      o.base = base_->unit(c);
      o.colouring.assign(1, 'X');
      return intern(o);
    }
    if (tag == 'K') {
      Op o;
      o.kind = 'k';
      o.colour = c;
      return intern(o);
    }
    if (tag == 'L' && has_L()) {
      Op o;
      o.kind = 'l';
      o.colour = c;
      return intern(o);
    }
    throw std::invalid_argument(name() + ": no unit for colour " + colour);
  }
  OpId f_op(const std::string& base_colour) {
    if (!has_f()) throw std::invalid_argument(name() + ": no f generator");
    Op o;
    o.kind = 'f';
    o.colour = base_colour;
    return intern(o);
  }
  OpId g_op(const std::string& base_colour) {
    if (!has_g()) throw std::invalid_argument(name() + ": no g generator");
    Op o;
    o.kind = 'm';
    o.base = base_->unit(base_colour);
    o.colouring.assign(1, 'K');
    return intern(o);
  }
  OpId mixed(OpId base_op, const std::vector<char>& colouring) {
    Op o;
    o.kind = 'm';
    o.base = base_op;
    o.colouring = colouring;
    for (char c : colouring)
      if (c == 'K' && !mixed_allowed())
        throw std::invalid_argument(name() + ": K-coloured edges not available");
    return intern(o);
  }
  OpId base_op_of(OpId b) { return op(b).kind == 'm' ? op(b).base : -1; }
  std::vector<char> colouring_of(OpId b) { return op(b).colouring; }
  char kind_of(OpId b) { return op(b).kind; }

  SubstResult substitute(OpId b, const std::vector<OpId>& args) override {
    const Op o = op(b);
    auto srcs = sources(b);
    if (srcs.size() != args.size())
      throw std::invalid_argument(name() + ": arity mismatch");
    for (size_t i = 0; i < args.size(); ++i)
      if (colour_of(args[i]) != srcs[i])
        throw std::invalid_argument(name() + ": colour mismatch");
    if (o.kind == 'k' || o.kind == 'l') {
      // unit: result is the argument
      const Op& a = op(args[0]);
      SubstResult r;
      r.op = args[0];
      int ar = (int)sources(args[0]).size();
      for (int j = 0; j < ar; ++j) r.slot_origin.push_back({0, j});
      (void)a;
      return r;
    }
    if (o.kind == 'f') {
      // argument is the K-unit
      SubstResult r;
      r.op = b;
      r.slot_origin = {{0, 0}};
      return r;
    }
    // mixed: base substitution with X-slots taking the args' base parts and
    // K-slots taking base units
    auto bss = base_->sources(o.base);
    std::vector<OpId> bargs(bss.size());
    for (size_t i = 0; i < bss.size(); ++i) {
      if (o.colouring[i] == 'X') bargs[i] = op(args[i]).base;
      else bargs[i] = base_->unit(bss[i]);
    }
    auto br = base_->substitute(o.base, bargs);
    Op res;
    res.kind = 'm';
    res.base = br.op;
    res.colouring.resize(br.slot_origin.size());
    SubstResult r;
    for (size_t t = 0; t < br.slot_origin.size(); ++t) {
      auto [i, j] = br.slot_origin[t];
      if (o.colouring[i] == 'X') {
        res.colouring[t] = op(args[i]).colouring[j];
      } else {
        res.colouring[t] = 'K';
      }
    }
    // fiber origin: slots of K-slot units map back to the K argument's slot 0
    r.slot_origin.resize(br.slot_origin.size());
    for (size_t t = 0; t < br.slot_origin.size(); ++t) {
      auto [i, j] = br.slot_origin[t];
      r.slot_origin[t] = {i, j};
    }
    r.op = intern(res);
    return r;
  }
  std::vector<OpId> enumerate(int max_size) override {
    std::vector<OpId> out;
    for (OpId b : base_->enumerate(max_size)) {
      int k = base_->arity(b);
      if (!mixed_allowed()) {
        Op o;
        o.kind = 'm';
        o.base = b;
        o.colouring.assign(k, 'X');
        out.push_back(intern(o));
      } else {
        bool unit = base_->is_unit(b);
        for (int mask = 0; mask < (1 << k); ++mask) {
          Op o;
          o.kind = 'm';
          o.base = b;
          o.colouring.resize(k);
          for (int i = 0; i < k; ++i) o.colouring[i] = (mask >> i & 1) ? 'K' : 'X';
          // the K-coloured unit corolla is the g generator; keep it once
          (void)unit;
          out.push_back(intern(o));
        }
      }
    }
    std::set<std::string> base_colours;
    for (OpId b : base_->enumerate(max_size)) {
      base_colours.insert(base_->colour_of(b));
      for (auto& s : base_->sources(b)) base_colours.insert(s);
    }
    for (auto& c : base_colours) {
      Op ku;
      ku.kind = 'k';
      ku.colour = c;
      out.push_back(intern(ku));
      if (has_L()) {
        Op lu;
        lu.kind = 'l';
        lu.colour = c;
        out.push_back(intern(lu));
      }
      if (has_f()) {
        Op fo;
        fo.kind = 'f';
        fo.colour = c;
        out.push_back(intern(fo));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::string op_key(OpId b) override {
    const Op& o = op(b);
    if (o.kind == 'm') {
      std::string s = "m[" + base_->op_key(o.base) + "|";
      for (char c : o.colouring) s += c;
      return s + "]";
    }
    return std::string(1, o.kind) + "[" + o.colour + "]";
  }
  std::vector<std::pair<int, int>> slot_adjacency(OpId b) override {
    const Op& o = op(b);
    return o.kind == 'm' ? base_->slot_adjacency(o.base)
                         : std::vector<std::pair<int, int>>{};
  }
  bool has_nullary_ops() const override { return base_->has_nullary_ops(); }
  bool has_size_preserving_subs() const override {
    return base_->has_size_preserving_subs();
  }

  MonadPtr base() const { return base_; }

  const Op& op(OpId b) const { return store_.at(b); }
  OpId intern(const Op& o) {
    std::ostringstream key;
    key << o.kind << ';' << o.base << ';' << o.colour << ';';
    for (char c : o.colouring) key << c;
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(key.str());
    if (it != index_.end()) return it->second;
    OpId id = (OpId)store_.size();
    store_.push_back(o);
    index_[key.str()] = id;
    return id;
  }

 private:
  MonadPtr base_;
  Derived which_;
  mutable std::mutex mu_;
  std::deque<Op> store_;
  std::map<std::string, OpId> index_;
};

// ---------- plus construction ----------

class PlusMonad final : public PolynomialMonad {
 public:
  explicit PlusMonad(MonadPtr base) : base_(std::move(base)) {}

  struct PNode {
    OpId dec = -1;                      // decoration in the base monad
    std::vector<int> ch;                // per base slot: node index or -1 (leaf)
  };
  struct PTree {
    // node 0 is the root when nodes nonempty; edge-coloured leaves implicit
    std::vector<PNode> nodes;
    std::string root_colour;  // for the vertex-free tree: base colour key
  };

  std::string name() const override { return "plus(" + base_->name() + ")"; }

  std::string colour_of(OpId b) override { return base_->op_key(composite(b).first); }
  std::vector<std::string> sources(OpId b) override {
    std::vector<std::string> out;
    for (auto& nd : tree(b).nodes) out.push_back(base_->op_key(nd.dec));
    return out;
  }
  int size(OpId b) override {
    const PTree& t = tree(b);
    if (t.nodes.empty()) return 1;
    int leaves = 0;
    for (auto& nd : t.nodes)
      for (int c : nd.ch)
        if (c < 0) ++leaves;
    return (int)t.nodes.size() + leaves;
  }
  bool is_unit(OpId b) override { return tree(b).nodes.size() == 1; }
  OpId unit(const std::string& colour) override {
    OpId dec = base_key_to_op(colour);
    PTree t;
    PNode nd;
    nd.dec = dec;
    nd.ch.assign(base_->arity(dec), -1);
    t.nodes.push_back(nd);
    return intern(t);
  }
  SubstResult substitute(OpId b, const std::vector<OpId>& args) override {
    const PTree host = tree(b);
    auto srcs = sources(b);
    if (srcs.size() != args.size())
      throw std::invalid_argument(name() + ": arity mismatch");
    for (size_t i = 0; i < args.size(); ++i)
      if (colour_of(args[i]) != srcs[i])
        throw std::invalid_argument(name() + ": colour mismatch");
    if (host.nodes.empty()) {
      // the vertex-free tree has an empty fiber
      SubstResult r;
      r.op = intern(host);
      return r;
    }
    // graft each arg into its vertex; leaves of the arg correspond to the
    // composite's slots which align with the vertex's base slots
    PTree out;
    std::vector<std::pair<int, int>> origins_by_emit;  // (slot, arg vertex)
    // recursive emit over host nodes
    std::function<int(int)> emit_host = [&](int hn) -> int {
      const PNode& h = host.nodes[hn];
      int slot = hn;  // host slots are node indices (preorder by construction)
      const PTree& a = tree(args[slot]);
      // map arg leaves: composite slot index -> base slot of the decoration
      if (a.nodes.empty()) {
        // vertex-free arg deletes the vertex; splice the unique child through
        // h must be unary with its single slot
        if (h.ch.size() != 1)
          throw std::invalid_argument(name() + ": unit-tree arg at non-unary vertex");
        int c = h.ch[0];
        return c < 0 ? -1 : emit_host(c);
      }
      auto [comp, leafmap] = composite_with_leafmap(a);
      (void)comp;
      // emit arg nodes, plugging host children at arg leaves
      std::function<int(int)> emit_arg = [&](int an) -> int {
        const PNode& anode = a.nodes[an];
        int my = (int)out.nodes.size();
        out.nodes.push_back({});
        origins_by_emit.push_back({slot, an});
        PNode copy;
        copy.dec = anode.dec;
        copy.ch.assign(anode.ch.size(), -2);
        out.nodes[my] = copy;
        for (size_t j = 0; j < anode.ch.size(); ++j) {
          if (anode.ch[j] >= 0) {
            int sub = emit_arg(anode.ch[j]);
            out.nodes[my].ch[j] = sub;
          } else {
            // leaf (an, j): which composite slot is it?
            int cslot = -1;
            for (size_t t = 0; t < leafmap.size(); ++t)
              if (leafmap[t] == std::make_pair(an, (int)j)) cslot = (int)t;
            int hc = h.ch[cslot];
            out.nodes[my].ch[j] = hc < 0 ? -1 : emit_host(hc);
          }
        }
        return my;
      };
      return emit_arg(0);
    };
    int new_root = emit_host(0);
    if (new_root < 0) {
      // whole tree collapsed to an edge
      out.nodes.clear();
      out.root_colour = colour_of(b);
    } else if (new_root != 0) {
      throw std::runtime_error(name() + ": root emission out of order");
    }
    SubstResult r;
    r.op = intern(out);
    // result slots are node indices in emission order == preorder; origins
    // must be reported per arg's own preorder slot index, which equals the
    // arg node index
    r.slot_origin = origins_by_emit;
    return r;
  }
  std::vector<OpId> enumerate(int max_size) override {
    auto it = enum_cache_.find(max_size);
    if (it != enum_cache_.end()) return it->second;
    std::vector<OpId> out;
    std::set<std::string> cols;
    auto base_ops = base_->enumerate(max_size);
    for (OpId bo : base_ops) {
      cols.insert(base_->colour_of(bo));
      for (auto& s : base_->sources(bo)) cols.insert(s);
    }
    for (auto& c : cols) {
      PTree t;
      t.root_colour = base_->op_key(base_->unit(c));
      if (1 <= max_size) out.push_back(intern(t));
    }
    // trees with >= 1 vertex: recursive over root decoration and children,
    // memoized by budget; subtree candidates grouped by composite colour
    std::map<int, std::vector<PTree>> gen_cache;
    std::function<const std::vector<PTree>&(int)> gen =
        [&](int budget) -> const std::vector<PTree>& {
      auto cit = gen_cache.find(budget);
      if (cit != gen_cache.end()) return cit->second;
      std::vector<PTree> res;
      if (budget >= 1) {
        for (OpId dec : base_ops) {
          int k = base_->arity(dec);
          if (1 + k > budget && k > 0) continue;
          if (1 > budget) continue;
          // child subtrees attach where the edge colour (a base colour, the
          // slot's source) matches the subtree composite's target colour
          auto ss = base_->sources(dec);
          std::vector<std::vector<PTree>> options(k);
          for (int s = 0; s < k; ++s)
            for (auto& sub : gen(budget - 1)) {
              auto [comp, lm] = composite_with_leafmap(sub);
              (void)lm;
              if (base_->colour_of(comp) == ss[s]) options[s].push_back(sub);
            }
          std::vector<int> pick(k, -1);
          std::function<void(int, int)> rec = [&](int slot, int used) {
            if (used > budget) return;
            if (slot == k) {
              PTree t;
              PNode root;
              root.dec = dec;
              root.ch.assign(k, -1);
              t.nodes.push_back(root);
              std::function<int(const PTree&)> append = [&](const PTree& sub) -> int {
                int base_idx = (int)t.nodes.size();
                for (auto nd : sub.nodes) {
                  for (auto& c : nd.ch)
                    if (c >= 0) c += base_idx;
                  t.nodes.push_back(nd);
                }
                return base_idx;
              };
              for (int s = 0; s < k; ++s)
                if (pick[s] >= 0) t.nodes[0].ch[s] = append(options[s][pick[s]]);
              res.push_back(normalize(t));
              return;
            }
            pick[slot] = -1;
            rec(slot + 1, used + 1);  // leaf edge
            for (int i = 0; i < (int)options[slot].size(); ++i) {
              int sz = tree_size(options[slot][i]);
              if (used + sz + (k - slot - 1) > budget) continue;
              pick[slot] = i;
              rec(slot + 1, used + sz);
            }
            pick[slot] = -1;
          };
          rec(0, 1);
        }
      }
      return gen_cache.emplace(budget, std::move(res)).first->second;
    };
    for (auto& t : gen(max_size)) out.push_back(intern(t));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    enum_cache_[max_size] = out;
    return out;
  }
  std::string op_key(OpId b) override { return key_of(tree(b)); }
  std::vector<std::pair<int, int>> slot_adjacency(OpId b) override {
    std::vector<std::pair<int, int>> out;
    const PTree& t = tree(b);
    for (int nidx = 0; nidx < (int)t.nodes.size(); ++nidx)
      for (int c : t.nodes[nidx].ch)
        if (c >= 0) out.push_back({nidx, c});
    return out;
  }
  bool has_nullary_ops() const override { return true; }
  bool has_size_preserving_subs() const override { return false; }

  MonadPtr base() const { return base_; }

 private:
  int tree_size(const PTree& t) {
    if (t.nodes.empty()) return 1;
    int leaves = 0;
    for (auto& nd : t.nodes)
      for (int c : nd.ch)
        if (c < 0) ++leaves;
    return (int)t.nodes.size() + leaves;
  }
  // composite base operation and, per composite slot, the (node, slot) leaf
  std::pair<OpId, std::vector<std::pair<int, int>>> composite_with_leafmap(
      const PTree& t) {
    if (t.nodes.empty()) {
      return {base_key_to_op(t.root_colour), {}};
    }
    std::function<std::pair<OpId, std::vector<std::pair<int, int>>>(int)> rec =
        [&](int n) -> std::pair<OpId, std::vector<std::pair<int, int>>> {
      const PNode& nd = t.nodes[n];
      auto ss = base_->sources(nd.dec);
      std::vector<OpId> args(nd.ch.size());
      std::vector<std::vector<std::pair<int, int>>> maps(nd.ch.size());
      for (size_t j = 0; j < nd.ch.size(); ++j) {
        if (nd.ch[j] < 0) {
          args[j] = base_->unit(ss[j]);
          maps[j] = {{n, (int)j}};
        } else {
          auto [op2, m2] = rec(nd.ch[j]);
          args[j] = op2;
          maps[j] = m2;
        }
      }
      auto r = base_->substitute(nd.dec, args);
      std::vector<std::pair<int, int>> lm(r.slot_origin.size());
      for (size_t tt = 0; tt < r.slot_origin.size(); ++tt) {
        auto [i, j] = r.slot_origin[tt];
        lm[tt] = maps[i][j];
      }
      return {r.op, lm};
    };
    return rec(0);
  }
  // preorder normal form: nodes renumbered by preorder walk
  PTree normalize(const PTree& t) {
    if (t.nodes.empty()) return t;
    PTree out;
    out.root_colour = t.root_colour;
    std::function<int(int)> rec = [&](int n) -> int {
      int my = (int)out.nodes.size();
      out.nodes.push_back({});
      PNode copy;
      copy.dec = t.nodes[n].dec;
      copy.ch.assign(t.nodes[n].ch.size(), -1);
      out.nodes[my] = copy;
      for (size_t j = 0; j < t.nodes[n].ch.size(); ++j)
        if (t.nodes[n].ch[j] >= 0) out.nodes[my].ch[j] = rec(t.nodes[n].ch[j]);
      return my;
    };
    rec(0);
    return out;
  }
  std::string key_of(const PTree& t) {
    if (t.nodes.empty()) return "e[" + t.root_colour + "]";
    std::function<std::string(int)> rec = [&](int n) -> std::string {
      std::string s = "v[" + base_->op_key(t.nodes[n].dec) + "](";
      for (int c : t.nodes[n].ch) s += c < 0 ? std::string("-") : rec(c);
      return s + ")";
    };
    return rec(0);
  }
  OpId base_key_to_op(const std::string& key) {
    std::lock_guard<std::mutex> lock(key_mu_);
    auto it = base_key_.find(key);
    if (it != base_key_.end()) return it->second;
    for (int sz = 1; sz <= 12; ++sz) {
      for (OpId b : base_->enumerate(sz)) base_key_[base_->op_key(b)] = b;
      it = base_key_.find(key);
      if (it != base_key_.end()) return it->second;
    }
    throw std::invalid_argument(name() + ": unknown base colour " + key);
  }
  const PTree& tree(OpId b) const { return store_.at(b); }
  std::pair<OpId, std::vector<std::pair<int, int>>> composite(OpId b) {
    return composite_with_leafmap(tree(b));
  }
  OpId intern(const PTree& t) {
    auto key = key_of(t);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    OpId id = (OpId)store_.size();
    store_.push_back(t);
    index_[key] = id;
    return id;
  }

  MonadPtr base_;
  mutable std::mutex mu_;
  std::deque<PTree> store_;
  std::map<std::string, OpId> index_;
  std::mutex key_mu_;
  std::map<std::string, OpId> base_key_;
  std::map<int, std::vector<OpId>> enum_cache_;
};

}  // namespace

MonadPtr derive(const MonadPtr& base, Derived which) {
  return std::make_shared<DerivedMonad>(base, which);
}

MonadPtr plus(const MonadPtr& base) { return std::make_shared<PlusMonad>(base); }

// accessors used by the classifier (keeps DerivedMonad private otherwise)
namespace derived_access {

char kind_of(const MonadPtr& m, OpId b) {
  return std::static_pointer_cast<DerivedMonad>(m)->kind_of(b);
}
OpId base_op_of(const MonadPtr& m, OpId b) {
  return std::static_pointer_cast<DerivedMonad>(m)->base_op_of(b);
}
std::vector<char> colouring_of(const MonadPtr& m, OpId b) {
  return std::static_pointer_cast<DerivedMonad>(m)->colouring_of(b);
}
OpId mixed(const MonadPtr& m, OpId base_op, const std::vector<char>& col) {
  return std::static_pointer_cast<DerivedMonad>(m)->mixed(base_op, col);
}
OpId f_op(const MonadPtr& m, const std::string& c) {
  return std::static_pointer_cast<DerivedMonad>(m)->f_op(c);
}
OpId g_op(const MonadPtr& m, const std::string& c) {
  return std::static_pointer_cast<DerivedMonad>(m)->g_op(c);
}
MonadPtr base_of(const MonadPtr& m) {
  return std::static_pointer_cast<DerivedMonad>(m)->base();
}

}  // namespace derived_access

}  // namespace polymnd
