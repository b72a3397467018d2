#include "polymnd/monad.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace polymnd {

std::vector<std::string> PolynomialMonad::colours(int max_size) {
  std::set<std::string> cs;
  for (OpId b : enumerate(max_size)) {
    cs.insert(colour_of(b));
    for (auto& s : sources(b)) cs.insert(s);
  }
  return {cs.begin(), cs.end()};
}

std::vector<OpId> PolynomialMonad::enumerate_colour(const std::string& colour,
                                                    int max_size) {
  std::vector<OpId> out;
  for (OpId b : enumerate(max_size))
    if (colour_of(b) == colour) out.push_back(b);
  return out;
}

// ---------- identity monad ----------

namespace {

class IdentityMonad final : public PolynomialMonad {
 public:
  explicit IdentityMonad(std::vector<std::string> colours)
      : colours_(std::move(colours)) {}
  std::string name() const override { return "identity"; }
  std::string colour_of(OpId b) override { return colours_.at(b); }
  std::vector<std::string> sources(OpId b) override { return {colours_.at(b)}; }
  int size(OpId) override { return 1; }
  bool is_unit(OpId) override { return true; }
  OpId unit(const std::string& colour) override {
    for (size_t i = 0; i < colours_.size(); ++i)
      if (colours_[i] == colour) return (OpId)i;
    throw std::invalid_argument("identity: unknown colour " + colour);
  }
  SubstResult substitute(OpId b, const std::vector<OpId>& args) override {
    if (args.size() != 1 || args[0] != b)
      throw std::invalid_argument("identity: bad substitution");
    return {b, {{0, 0}}};
  }
  std::vector<OpId> enumerate(int) override {
    std::vector<OpId> out(colours_.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = (OpId)i;
    return out;
  }
  std::string op_key(OpId b) override { return "1_" + colours_.at(b); }
  bool has_nullary_ops() const override { return false; }
  bool has_size_preserving_subs() const override { return false; }

 private:
  std::vector<std::string> colours_;
};

// ---------- finite table-driven monad (includes linear monads) ----------

class FiniteMonad final : public PolynomialMonad {
 public:
  struct OpData {
    std::string id;
    std::string target;
    std::vector<std::string> fiber;
  };

  FiniteMonad(std::string name, std::vector<OpData> ops,
              std::map<std::string, std::string> unit_of_colour,
              std::map<std::string, std::pair<std::string, std::vector<std::pair<int, int>>>>
                  subst)
      : name_(std::move(name)), ops_(std::move(ops)),
        unit_of_colour_(std::move(unit_of_colour)), subst_(std::move(subst)) {
    for (size_t i = 0; i < ops_.size(); ++i) index_[ops_[i].id] = (OpId)i;
  }

  static std::string subst_key(const std::string& outer,
                               const std::vector<std::string>& inner) {
    std::string k = outer + "(";
    for (auto& s : inner) k += s + ",";
    return k + ")";
  }

  std::string name() const override { return name_; }
  std::string colour_of(OpId b) override { return ops_.at(b).target; }
  std::vector<std::string> sources(OpId b) override { return ops_.at(b).fiber; }
  int size(OpId b) override { return is_unit(b) ? 1 : 2; }
  bool is_unit(OpId b) override {
    auto it = unit_of_colour_.find(ops_.at(b).target);
    return it != unit_of_colour_.end() && it->second == ops_.at(b).id;
  }
  OpId unit(const std::string& colour) override {
    auto it = unit_of_colour_.find(colour);
    if (it == unit_of_colour_.end())
      throw std::invalid_argument(name_ + ": no unit for colour " + colour);
    return index_.at(it->second);
  }
  SubstResult substitute(OpId b, const std::vector<OpId>& args) override {
    auto& bd = ops_.at(b);
    if (args.size() != bd.fiber.size())
      throw std::invalid_argument(name_ + ": arity mismatch");
    bool all_unit = true;
    for (size_t i = 0; i < args.size(); ++i) {
      if (ops_.at(args[i]).target != bd.fiber[i])
        throw std::invalid_argument(name_ + ": colour mismatch in substitution");
      if (!is_unit(args[i])) all_unit = false;
    }
    if (all_unit) {
      SubstResult r;
      r.op = b;
      for (size_t i = 0; i < args.size(); ++i) r.slot_origin.push_back({(int)i, 0});
      return r;
    }
    if (is_unit(b) && args.size() == 1) {
      auto& ad = ops_.at(args[0]);
      SubstResult r;
      r.op = args[0];
      for (size_t j = 0; j < ad.fiber.size(); ++j) r.slot_origin.push_back({0, (int)j});
      return r;
    }
    std::vector<std::string> names;
    for (OpId a : args) names.push_back(ops_.at(a).id);
    auto it = subst_.find(subst_key(bd.id, names));
    if (it == subst_.end())
      throw std::invalid_argument(name_ + ": substitution table missing entry " +
                                  subst_key(bd.id, names));
    SubstResult r;
    r.op = index_.at(it->second.first);
    r.slot_origin = it->second.second;
    return r;
  }
  std::vector<OpId> enumerate(int) override {
    std::vector<OpId> out(ops_.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = (OpId)i;
    return out;
  }
  std::string op_key(OpId b) override { return ops_.at(b).id; }
  bool has_nullary_ops() const override {
    for (auto& o : ops_)
      if (o.fiber.empty()) return true;
    return false;
  }
  bool has_size_preserving_subs() const override { return true; }

 private:
  std::string name_;
  std::vector<OpData> ops_;
  std::map<std::string, OpId> index_;
  std::map<std::string, std::string> unit_of_colour_;
  std::map<std::string, std::pair<std::string, std::vector<std::pair<int, int>>>> subst_;
};

// ---------- free monoid monad ----------

class MonoidMonad final : public PolynomialMonad {
 public:
  std::string name() const override { return "monoids"; }
  std::string colour_of(OpId) override { return "*"; }
  std::vector<std::string> sources(OpId b) override {
    return std::vector<std::string>(b, "*");
  }
  int size(OpId b) override { return b + 1; }
  bool is_unit(OpId b) override { return b == 1; }
  OpId unit(const std::string& colour) override {
    if (colour != "*") throw std::invalid_argument("monoids: unknown colour");
    return 1;
  }
  SubstResult substitute(OpId b, const std::vector<OpId>& args) override {
    if ((int)args.size() != b) throw std::invalid_argument("monoids: arity mismatch");
    SubstResult r;
    int total = 0;
    for (int i = 0; i < b; ++i) {
      for (int j = 0; j < args[i]; ++j) r.slot_origin.push_back({i, j});
      total += args[i];
    }
    r.op = total;
    return r;
  }
  std::vector<OpId> enumerate(int max_size) override {
    std::vector<OpId> out;
    for (int k = 0; k + 1 <= max_size; ++k) out.push_back(k);
    return out;
  }
  std::string op_key(OpId b) override { return "L" + std::to_string(b); }
  std::vector<std::pair<int, int>> slot_adjacency(OpId b) override {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i + 1 < b; ++i) out.push_back({i, i + 1});
    return out;
  }
  bool has_nullary_ops() const override { return true; }
  bool has_size_preserving_subs() const override { return false; }
};

}  // namespace

// factories living in the sibling translation units
MonadPtr make_nsoperad();
MonadPtr make_symop(const std::string& variant);
MonadPtr make_nop(const std::string& family, int n);
MonadPtr make_graph_monad(const std::string& which);

std::vector<BuiltinInfo> builtin_catalogue() {
  return {
      {"diagrams", "C-coloured corollas", "yes"},
      {"identity", "coloured units", "yes"},
      {"monoids", "linear rooted trees", "yes"},
      {"nsoperads", "planar rooted trees", "yes"},
      {"symop", "rooted trees", "no"},
      {"symop-reduced", "non-degenerate rooted trees", "yes"},
      {"symop-constant-free", "regular rooted trees", "yes"},
      {"symop-normal", "normal rooted trees", "yes"},
      {"cyclic", "trees", "no"},
      {"cyclic-reduced", "non-degenerate trees", "yes"},
      {"cyclic-constant-free", "regular trees", "yes"},
      {"cyclic-normal", "normal trees", "yes"},
      {"O(n)", "n-planar trees", "no (n>=2)"},
      {"RO(n)", "non-degenerate n-planar trees", "yes"},
      {"CFO(n)", "regular n-planar trees", "yes"},
      {"NO(n)", "normal n-planar trees", "yes"},
      {"dioperads", "directed trees", "no"},
      {"dioperads-normal", "normal directed trees", "yes"},
      {"halfprops", "half-graphs", "no"},
      {"halfprops-normal", "normal half-graphs", "yes"},
      {"modular", "connected graphs", "no"},
      {"modular-normal", "normal connected graphs", "no"},
      {"properads", "loop-free connected directed graphs", "no"},
      {"properads-normal", "normal loop-free connected directed graphs", "no"},
      {"props", "loop-free directed graphs", "no"},
      {"props-normal", "normal loop-free directed graphs", "no"},
      {"wheeled-operads", "wheeled rooted trees", "no"},
      {"wheeled-operads-normal", "normal wheeled rooted trees", "yes"},
      {"wheeled-properads", "connected directed graphs", "no"},
      {"wheeled-properads-normal", "normal connected directed graphs", "no"},
      {"plus(identity)", "linear rooted trees", "yes"},
      {"plus(monoids)", "planar rooted trees", "yes"},
      {"plus(nsoperads)", "two-level planar trees", "yes"},
  };
}

MonadPtr builtin(const std::string& name) {
  if (name == "identity") return std::make_shared<IdentityMonad>(std::vector<std::string>{"*"});
  if (name.rfind("identity:", 0) == 0) {
    std::vector<std::string> cs;
    std::string rest = name.substr(9);
    std::stringstream ss(rest);
    std::string c;
    while (std::getline(ss, c, ',')) cs.push_back(c);
    return std::make_shared<IdentityMonad>(cs);
  }
  if (name == "monoids") return std::make_shared<MonoidMonad>();
  if (name == "nsoperads") return make_nsoperad();
  if (name == "diagrams") {
    // linear monad of the walking arrow category x -> y
    std::vector<FiniteMonad::OpData> ops = {
        {"id_x", "x", {"x"}}, {"id_y", "y", {"y"}}, {"f", "y", {"x"}}};
    std::map<std::string, std::string> units = {{"x", "id_x"}, {"y", "id_y"}};
    std::map<std::string, std::pair<std::string, std::vector<std::pair<int, int>>>> subst;
    subst[FiniteMonad::subst_key("f", {"id_x"})] = {"f", {{0, 0}}};
    return std::make_shared<FiniteMonad>("diagrams", ops, units, subst);
  }
  if (name == "symop" || name.rfind("symop-", 0) == 0)
    return make_symop(name == "symop" ? "general" : name.substr(6));
  if (name.rfind("plus(", 0) == 0 && name.back() == ')')
    return plus(builtin(name.substr(5, name.size() - 6)));
  auto paren = [&](const std::string& prefix) -> std::optional<int> {
    if (name.rfind(prefix + "(", 0) == 0 && name.back() == ')')
      return std::stoi(name.substr(prefix.size() + 1, name.size() - prefix.size() - 2));
    return std::nullopt;
  };
  if (auto n = paren("O")) return make_nop("general", *n);
  if (auto n = paren("NO")) return make_nop("normal", *n);
  if (auto n = paren("CFO")) return make_nop("constant-free", *n);
  if (auto n = paren("RO")) return make_nop("reduced", *n);
  for (const char* g : {"cyclic", "cyclic-reduced", "cyclic-constant-free",
                        "cyclic-normal", "dioperads", "dioperads-normal", "halfprops",
                        "halfprops-normal", "modular", "modular-normal", "properads",
                        "properads-normal", "props", "props-normal", "wheeled-operads",
                        "wheeled-operads-normal", "wheeled-properads",
                        "wheeled-properads-normal"})
    if (name == g) return make_graph_monad(name);
  throw std::invalid_argument("unknown builtin monad: " + name);
}

MonadPtr finite_monad_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::vector<FiniteMonad::OpData> ops;
  for (auto& o : j.at("ops")) {
    FiniteMonad::OpData d;
    d.id = o.at("id").get<std::string>();
    d.target = o.at("target").get<std::string>();
    for (auto& c : o.at("fiber")) d.fiber.push_back(c.get<std::string>());
    ops.push_back(d);
  }
  std::map<std::string, std::string> units;
  for (auto& [c, u] : j.at("unit").items()) units[c] = u.get<std::string>();
  std::map<std::string, std::pair<std::string, std::vector<std::pair<int, int>>>> subst;
  if (j.contains("subst"))
    for (auto& s : j.at("subst")) {
      std::vector<std::string> inner;
      for (auto& i : s.at("inner")) inner.push_back(i.get<std::string>());
      std::vector<std::pair<int, int>> fm;
      if (s.contains("fiber_map"))
        for (auto& p : s.at("fiber_map")) fm.push_back({p[0].get<int>(), p[1].get<int>()});
      subst[FiniteMonad::subst_key(s.at("outer").get<std::string>(), inner)] = {
          s.at("result").get<std::string>(), fm};
    }
  std::string nm = j.contains("name") ? j.at("name").get<std::string>() : "user";
  return std::make_shared<FiniteMonad>(nm, ops, units, subst);
}

// ---------- laws ----------

LawReport check_monad_laws(const MonadPtr& T, int bound) {
  LawReport rep;
  auto ops = T->enumerate(bound);
  std::map<std::string, int> unit_size;
  auto unit_delta = [&](OpId b) {
    std::string c = T->colour_of(b);
    auto it = unit_size.find(c);
    if (it == unit_size.end()) it = unit_size.emplace(c, T->size(T->unit(c))).first;
    return T->size(b) - it->second;
  };
  std::map<std::string, std::vector<OpId>> by_colour;
  for (OpId b : ops) by_colour[T->colour_of(b)].push_back(b);

  auto fail = [&](const std::string& msg) {
    if (rep.ok) {
      rep.ok = false;
      rep.witness = msg;
    }
  };

  for (OpId b : ops) {
    auto srcs = T->sources(b);
    int k = (int)srcs.size();
    {
      std::vector<OpId> us;
      for (auto& c : srcs) us.push_back(T->unit(c));
      auto r = T->substitute(b, us);
      ++rep.checked;
      if (r.op != b) fail("right unit law fails at " + T->op_key(b));
      for (int i = 0; i < (int)r.slot_origin.size(); ++i)
        if (r.slot_origin[i] != std::make_pair(i, 0))
          fail("right unit fiber map fails at " + T->op_key(b));
    }
    {
      auto r = T->substitute(T->unit(T->colour_of(b)), {b});
      ++rep.checked;
      if (r.op != b) fail("left unit law fails at " + T->op_key(b));
      for (int j = 0; j < (int)r.slot_origin.size(); ++j)
        if (r.slot_origin[j] != std::make_pair(0, j))
          fail("left unit fiber map fails at " + T->op_key(b));
    }
    if (!rep.ok) return rep;

    int slack = bound - T->size(b);
    std::vector<OpId> bs(k);
    std::function<void(int, int)> mid = [&](int i, int used) {
      if (!rep.ok) return;
      if (i == k) {
        auto d = T->substitute(b, bs);
        if (T->size(d.op) > bound) return;
        auto dsrcs = T->sources(d.op);
        int m = (int)dsrcs.size();
        int islack = bound - T->size(d.op);
        std::vector<std::vector<OpId>> cs(k);
        for (int ii = 0; ii < k; ++ii) cs[ii].resize(T->arity(bs[ii]));
        struct SlotRef {
          int i, j;
          std::string colour;
        };
        std::vector<SlotRef> flat;
        for (int ii = 0; ii < k; ++ii) {
          auto ss = T->sources(bs[ii]);
          for (int jj = 0; jj < (int)ss.size(); ++jj) flat.push_back({ii, jj, ss[jj]});
        }
        std::function<void(int, int)> inner = [&](int fi, int iused) {
          if (!rep.ok) return;
          if (fi == (int)flat.size()) {
            std::vector<OpId> dargs(m);
            for (int t = 0; t < m; ++t) {
              auto [oi, oj] = d.slot_origin[t];
              dargs[t] = cs[oi][oj];
            }
            SubstResult r1;
            try {
              r1 = T->substitute(d.op, dargs);
            } catch (const std::exception& e) {
              fail(std::string("route-1 substitution failed: ") + e.what());
              return;
            }
            if (T->size(r1.op) > bound) return;
            std::vector<OpId> es(k);
            std::vector<SubstResult> ers(k);
            for (int ii = 0; ii < k; ++ii) {
              ers[ii] = T->substitute(bs[ii], cs[ii]);
              es[ii] = ers[ii].op;
            }
            SubstResult r2 = T->substitute(b, es);
            ++rep.checked;
            if (r1.op != r2.op) {
              fail("associativity fails at " + T->op_key(b));
              return;
            }
            int n = (int)r1.slot_origin.size();
            for (int t = 0; t < n; ++t) {
              auto [dt, cu] = r1.slot_origin[t];
              auto [bi, bj] = d.slot_origin[dt];
              auto [i2, w] = r2.slot_origin[t];
              auto [j2, u2] = ers[i2].slot_origin[w];
              if (bi != i2 || bj != j2 || cu != u2) {
                fail("fiber coherence fails at " + T->op_key(b));
                return;
              }
            }
          } else {
            auto& fr = flat[fi];
            for (OpId c : by_colour[fr.colour]) {
              int d2 = unit_delta(c);
              if (iused + d2 > islack && d2 > 0) continue;
              cs[fr.i][fr.j] = c;
              inner(fi + 1, iused + std::max(0, d2));
            }
          }
        };
        inner(0, 0);
        return;
      }
      for (OpId c : by_colour[srcs[i]]) {
        int d2 = unit_delta(c);
        if (used + d2 > slack && d2 > 0) continue;
        bs[i] = c;
        mid(i + 1, used + std::max(0, d2));
      }
    };
    mid(0, 0);
    if (!rep.ok) return rep;
  }
  return rep;
}

// ---------- evaluation ----------

std::map<std::string, std::vector<EvalElement>> eval(const MonadPtr& T,
                                                     const Collection& X, int bound) {
  std::map<std::string, std::vector<EvalElement>> out;
  for (OpId b : T->enumerate(bound)) {
    auto srcs = T->sources(b);
    bool possible = true;
    for (auto& c : srcs)
      if (X.size_at(c) == 0) {
        possible = false;
        break;
      }
    if (!possible) continue;
    std::vector<int> assign(srcs.size(), 0);
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == srcs.size()) {
        out[T->colour_of(b)].push_back({b, assign});
        return;
      }
      for (int x = 0; x < X.size_at(srcs[i]); ++x) {
        assign[i] = x;
        rec(i + 1);
      }
    };
    rec(0);
  }
  return out;
}

// ---------- operad view ----------

std::vector<std::string> OperadView::source_list(const MonadPtr& T, const TOperation& t) {
  auto s = T->sources(t.op);
  std::vector<std::string> out;
  for (int p = 0; p < (int)t.sigma.size(); ++p) out.push_back(s[t.sigma[p]]);
  return out;
}

TOperation OperadView::compose(const MonadPtr& T, const TOperation& outer,
                               const std::vector<TOperation>& inner) {
  int k = (int)outer.sigma.size();
  if ((int)inner.size() != k)
    throw std::invalid_argument("operad compose: arity mismatch");
  auto osrc = T->sources(outer.op);
  std::vector<OpId> args(k);
  for (int p = 0; p < k; ++p) {
    int slot = outer.sigma[p];
    if (T->colour_of(inner[p].op) != osrc[slot])
      throw std::invalid_argument("operad compose: colour mismatch");
    args[slot] = inner[p].op;
  }
  auto r = T->substitute(outer.op, args);
  std::map<std::pair<int, int>, int> slot_of;
  for (int t = 0; t < (int)r.slot_origin.size(); ++t) slot_of[r.slot_origin[t]] = t;
  TOperation out;
  out.op = r.op;
  for (int p = 0; p < k; ++p) {
    int slot = outer.sigma[p];
    for (int q = 0; q < (int)inner[p].sigma.size(); ++q)
      out.sigma.push_back(slot_of.at({slot, inner[p].sigma[q]}));
  }
  return out;
}

// ---------- cartesian morphism validation ----------

CartesianReport validate_cartesian(CartesianMonadMap& f, int bound) {
  CartesianReport rep;
  auto fail = [&](const std::string& m) {
    if (rep.ok) {
      rep.ok = false;
      rep.witness = m;
    }
  };
  auto ops = f.src->enumerate(bound);
  for (OpId b : ops) {
    OpId fb = f.phi(b);
    auto s1 = f.src->sources(b);
    auto s2 = f.dst->sources(fb);
    if (s1.size() != s2.size()) {
      fail("fiber cardinality changes at " + f.src->op_key(b));
      continue;
    }
    for (size_t i = 0; i < s1.size(); ++i)
      if (f.delta(s1[i]) != s2[i])
        fail("fiber sources not delta-compatible at " + f.src->op_key(b));
    if (f.delta(f.src->colour_of(b)) != f.dst->colour_of(fb))
      fail("target colour not delta-compatible at " + f.src->op_key(b));
  }
  for (auto& c : f.src->colours(bound)) {
    OpId u = f.src->unit(c);
    if (f.phi(u) != f.dst->unit(f.delta(c))) fail("unit not preserved at colour " + c);
  }
  std::map<std::string, std::vector<OpId>> by_colour;
  for (OpId b : ops) by_colour[f.src->colour_of(b)].push_back(b);
  for (OpId b : ops) {
    auto srcs = f.src->sources(b);
    int k = (int)srcs.size();
    std::vector<OpId> bs(k);
    std::function<void(int)> rec = [&](int i) {
      if (!rep.ok) return;
      if (i == k) {
        SubstResult r1;
        try {
          r1 = f.src->substitute(b, bs);
        } catch (...) {
          return;
        }
        if (f.src->size(r1.op) > bound) return;
        std::vector<OpId> fbs(k);
        for (int j = 0; j < k; ++j) fbs[j] = f.phi(bs[j]);
        auto r2 = f.dst->substitute(f.phi(b), fbs);
        if (f.phi(r1.op) != r2.op)
          fail("substitution not preserved at " + f.src->op_key(b));
        else if (r1.slot_origin != r2.slot_origin)
          fail("fiber bijection not preserved at " + f.src->op_key(b));
        return;
      }
      for (OpId c : by_colour[srcs[i]]) {
        bs[i] = c;
        rec(i + 1);
      }
    };
    rec(0);
    if (!rep.ok) break;
  }
  return rep;
}

}  // namespace polymnd
