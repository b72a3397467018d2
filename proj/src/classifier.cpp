#include "polymnd/classifier.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "polymnd/par.hpp"

namespace polymnd {

bool ClsMorphism::operator<(const ClsMorphism& o) const {
  if (!(target == o.target)) return target < o.target;
  if (!(source == o.source)) return source < o.source;
  for (size_t i = 0; i < data.size() && i < o.data.size(); ++i) {
    if (data[i].op != o.data[i].op) return data[i].op < o.data[i].op;
    if (data[i].col != o.data[i].col) return data[i].col < o.data[i].col;
    if (data[i].use_f != o.data[i].use_f) return data[i].use_f < o.data[i].use_f;
  }
  return data.size() < o.data.size();
}

bool ClsMorphism::operator==(const ClsMorphism& o) const {
  if (!(target == o.target) || !(source == o.source) || data.size() != o.data.size())
    return false;
  for (size_t i = 0; i < data.size(); ++i)
    if (data[i].op != o.data[i].op || data[i].col != o.data[i].col ||
        data[i].use_f != o.data[i].use_f)
      return false;
  return true;
}

Classifier::Classifier(MonadPtr T, ClsKind kind, int bound)
    : T_(std::move(T)), kind_(kind), bound_(bound) {
  for (OpId b : T_->enumerate(bound)) {
    int k = T_->arity(b);
    int radix = kind_ == ClsKind::Semifree ? 2 : 3;
    std::vector<char> col(k, 'X');
    std::function<void(int)> rec = [&](int i) {
      if (i == k) {
        objects_.push_back({b, col});
        return;
      }
      const char tags[3] = {'X', 'K', 'L'};
      for (int t = 0; t < radix; ++t) {
        col[i] = tags[t];
        rec(i + 1);
      }
    };
    rec(0);
  }
  std::sort(objects_.begin(), objects_.end());
  for (size_t i = 0; i < objects_.size(); ++i)
    index_[object_key(objects_[i])] = (int)i;
  // serial prefill so the per-target morphism kernel can run in parallel
  max_shrink_ = 0;
  for (OpId b : T_->enumerate(bound_)) {
    std::string c = T_->colour_of(b);
    if (!unit_size_.count(c)) unit_size_[c] = T_->size(T_->unit(c));
    for (auto& s : T_->sources(b))
      if (!unit_size_.count(s)) unit_size_[s] = T_->size(T_->unit(s));
    xcands_[c].push_back(b);
  }
  for (auto& [c, cands] : xcands_)
    for (OpId d : cands)
      max_shrink_ = std::max(max_shrink_, unit_size_[c] - T_->size(d));
  // units for colours appearing only as sources
  for (auto& [c, u] : unit_size_)
    if (!xcands_.count(c)) xcands_[c];
}

std::string Classifier::object_key(const ClsObject& o) const {
  std::string s = std::to_string(o.op) + "|";
  for (char c : o.col) s += c;
  return s;
}

std::string Classifier::object_text(const ClsObject& o) const {
  std::string s = T_->op_key(o.op) + "[";
  for (char c : o.col) s += c;
  return s + "]";
}

int Classifier::object_index(const ClsObject& o) const {
  auto it = index_.find(object_key(o));
  return it == index_.end() ? -1 : it->second;
}

std::string Classifier::component_colour(const ClsObject& o) const {
  return T_->colour_of(o.op);
}

const std::vector<OpId>& Classifier::x_candidates(const std::string& colour) const {
  auto it = xcands_.find(colour);
  if (it != xcands_.end()) return it->second;
  static const std::vector<OpId> empty;
  return empty;
}

ClsObject Classifier::apply(const ClsObject& target,
                            const std::vector<ClsMorphism::Entry>& data,
                            std::vector<int>* slot_map,
                            std::vector<std::pair<int, int>>* origin) const {
  auto srcs = T_->sources(target.op);
  int k = (int)srcs.size();
  if ((int)data.size() != k) throw std::invalid_argument("classifier: data arity");
  std::vector<OpId> bargs(k);
  for (int i = 0; i < k; ++i) {
    if (target.col[i] == 'X') {
      bargs[i] = data[i].op;
    } else {
      bargs[i] = T_->unit(srcs[i]);
    }
  }
  auto r = T_->substitute(target.op, bargs);
  ClsObject out;
  out.op = r.op;
  out.col.resize(r.slot_origin.size());
  for (size_t t = 0; t < r.slot_origin.size(); ++t) {
    auto [i, j] = r.slot_origin[t];
    if (target.col[i] == 'X') out.col[t] = data[i].col.empty() ? 'X' : data[i].col[j];
    else if (target.col[i] == 'K') out.col[t] = 'K';
    else out.col[t] = data[i].use_f ? 'K' : 'L';
  }
  if (slot_map) {
    slot_map->assign(r.slot_origin.size(), -1);
    for (size_t t = 0; t < r.slot_origin.size(); ++t)
      (*slot_map)[t] = r.slot_origin[t].first;
  }
  if (origin) *origin = r.slot_origin;
  return out;
}

std::vector<ClsMorphism> Classifier::morphisms_into(const ClsObject& target,
                                                    std::optional<int> exact_delta,
                                                    bool single_slot) const {
  std::vector<ClsMorphism> out;
  auto srcs = T_->sources(target.op);
  int k = (int)srcs.size();
  std::vector<ClsMorphism::Entry> data(k);
  // sizes are additive under substitution: size(source) = size(target) +
  // sum of per-slot growths (size(d) - unit size); shrinking is bounded by
  // max_shrink per slot
  auto usize = [&](const std::string& c) { return unit_size_.at(c); };
  bool exact = exact_delta.has_value();
  int slack = exact ? *exact_delta : bound_ - T_->size(target.op);
  std::function<void(int, int, bool)> rec = [&](int i, int used, bool nontrivial) {
    if (i == k) {
      if (exact && used != slack) return;
      ClsMorphism m;
      m.target = target;
      m.data = data;
      try {
        m.source = apply(target, data);
      } catch (...) {
        return;
      }
      if (T_->size(m.source.op) <= bound_) out.push_back(m);
      return;
    }
    int remaining = k - i - 1;
    if (target.col[i] == 'K') {
      data[i] = {T_->unit(srcs[i]), {}, false};
      rec(i + 1, used, nontrivial);
      return;
    }
    if (target.col[i] == 'L') {
      data[i] = {T_->unit(srcs[i]), {}, false};
      rec(i + 1, used, nontrivial);
      if (!single_slot || !nontrivial) {
        data[i] = {T_->unit(srcs[i]), {}, true};
        rec(i + 1, used, true);
      }
      return;
    }
    for (OpId d : x_candidates(srcs[i])) {
      int dd = T_->size(d) - usize(srcs[i]);
      if (used + dd > slack + remaining * max_shrink_) continue;
      bool unit = T_->is_unit(d);
      if (single_slot && nontrivial && !unit) continue;
      int m2 = T_->arity(d);
      if (kind_ == ClsKind::Semifree) {
        data[i] = {d, std::vector<char>(m2, 'X'), false};
        rec(i + 1, used + dd, nontrivial || !unit);
      } else {
        std::vector<char> col(m2, 'X');
        std::function<void(int)> rc = [&](int j) {
          if (j == m2) {
            bool triv = unit;
            for (char cc : col)
              if (cc == 'K') triv = false;
            if (single_slot && nontrivial && !triv) return;
            data[i] = {d, col, false};
            rec(i + 1, used + dd, nontrivial || !triv);
            return;
          }
          col[j] = 'X';
          rc(j + 1);
          col[j] = 'K';
          rc(j + 1);
          col[j] = 'X';
        };
        rc(0);
      }
    }
  };
  rec(0, 0, false);
  return out;
}

std::vector<ClsMorphism> Classifier::hom(const ClsObject& a, const ClsObject& b) const {
  std::vector<ClsMorphism> out;
  int delta = T_->size(a.op) - T_->size(b.op);
  for (auto& m : morphisms_into(b, delta))
    if (m.source == a) out.push_back(m);
  return out;
}

bool Classifier::has_adjacent_x(const ClsObject& o) const {
  for (auto [i, j] : T_->slot_adjacency(o.op))
    if (o.col[i] == 'X' && o.col[j] == 'X') return true;
  return false;
}

ClsMorphism Classifier::identity(const ClsObject& a) const {
  ClsMorphism m;
  m.source = a;
  m.target = a;
  auto srcs = T_->sources(a.op);
  for (size_t i = 0; i < srcs.size(); ++i) {
    ClsMorphism::Entry e;
    e.op = T_->unit(srcs[i]);
    if (a.col[i] == 'X') e.col = {a.col[i] == 'X' ? 'X' : 'K'};
    m.data.push_back(e);
  }
  return m;
}

ClsMorphism Classifier::compose(const ClsMorphism& second, const ClsMorphism& first) const {
  // first: a -> b, second: b -> c; result a -> c
  if (!(first.target == second.source))
    throw std::invalid_argument("classifier compose: mismatch");
  const ClsObject& c = second.target;
  auto csrcs = T_->sources(c.op);
  int k = (int)csrcs.size();
  ClsMorphism out;
  out.target = c;
  out.data.resize(k);
  for (int i = 0; i < k; ++i) {
    if (c.col[i] == 'K') {
      out.data[i] = {T_->unit(csrcs[i]), {}, false};
      continue;
    }
    if (c.col[i] == 'L') {
      // second's entry may pull back along f to a K slot of b; first then
      // keeps it (K slots are frozen), or second keeps L and first may pull
      bool f2 = second.data[i].use_f;
      // find the slot of b this L/K-slot corresponds to: slots of b map to
      // slots of c via second's substitution; L and K slots persist 1-1
      // locate by scanning apply's slot_map
      out.data[i] = {T_->unit(csrcs[i]), {}, false};
      out.data[i].use_f = f2;  // adjusted below when first pulls back
      continue;
    }
    out.data[i] = second.data[i];
  }
  // substitute first's data through second's: compute where each slot of b
  // came from in c, then compose base substitutions per X-slot of c
  std::vector<int> slot_map;  // slot of b -> slot index of c
  ClsObject b_check = apply(c, second.data, &slot_map);
  if (!(b_check == second.source))
    throw std::runtime_error("classifier compose: inconsistent data");
  auto bsrcs = T_->sources(second.source.op);
  // group b-slots by the c-slot they came from, in order
  std::map<int, std::vector<int>> by_c;
  for (int t = 0; t < (int)slot_map.size(); ++t) by_c[slot_map[t]].push_back(t);
  for (int i = 0; i < k; ++i) {
    if (c.col[i] == 'K') continue;
    if (c.col[i] == 'L') {
      if (!second.data[i].use_f) {
        // stayed L in b: first may use f on the corresponding b-slot
        int bslot = by_c[i].empty() ? -1 : by_c[i][0];
        if (bslot >= 0 && first.data[bslot].use_f) out.data[i].use_f = true;
      }
      continue;
    }
    // X-slot of c: second.data[i] is a base op with colouring; first's data
    // on the b-slots originating here substitute into it
    OpId d2 = second.data[i].op;
    auto d2src = T_->sources(d2);
    std::vector<OpId> inner(d2src.size());
    std::vector<std::vector<char>> inner_col(d2src.size());
    std::vector<bool> inner_f(d2src.size(), false);
    auto& bslots = by_c[i];
    if (bslots.size() != d2src.size())
      throw std::runtime_error("classifier compose: slot bookkeeping");
    for (size_t j = 0; j < bslots.size(); ++j) {
      int bs = bslots[j];
      if (second.data[i].col[j] == 'X') {
        inner[j] = first.data[bs].op;
        inner_col[j] = first.data[bs].col;
      } else {
        inner[j] = T_->unit(d2src[j]);
        inner_col[j] = {};
        inner_f[j] = false;
        // K slot of b under an X slot of c: stays K; first must be the unit
      }
    }
    auto r = T_->substitute(d2, inner);
    ClsMorphism::Entry e;
    e.op = r.op;
    e.col.resize(r.slot_origin.size());
    for (size_t t = 0; t < r.slot_origin.size(); ++t) {
      auto [j, u] = r.slot_origin[t];
      if (second.data[i].col[j] == 'X')
        e.col[t] = inner_col[j].empty() ? 'X' : inner_col[j][u];
      else
        e.col[t] = 'K';
    }
    out.data[i] = e;
  }
  out.source = apply(c, out.data);
  if (!(out.source == first.source))
    throw std::runtime_error("classifier compose: composite source mismatch");
  return out;
}

// ---------- components ----------

namespace {

struct UF {
  std::vector<int> p;
  explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::vector<ComponentReport> components(const Classifier& cls, bool parallel) {
  auto& objs = cls.objects();
  int n = (int)objs.size();
  // connectivity comes from the single-slot generating morphisms (every
  // morphism is a composite of these through intermediate objects of
  // comparable size); the parallel kernel generates them per target
  std::vector<std::vector<ClsMorphism>> gen_into;
  if (parallel) {
    gen_into = par_map<std::vector<ClsMorphism>>(
        n, [&](int i) { return cls.morphisms_into(objs[i], std::nullopt, true); });
  } else {
    gen_into.resize(n);
    for (int i = 0; i < n; ++i)
      gen_into[i] = cls.morphisms_into(objs[i], std::nullopt, true);
  }
  UF uf(n);
  for (int i = 0; i < n; ++i)
    for (auto& m : gen_into[i]) {
      int s = cls.object_index(m.source);
      if (s >= 0) uf.unite(s, i);
    }
  std::map<int, std::vector<int>> comp;
  for (int i = 0; i < n; ++i) comp[uf.find(i)].push_back(i);

  auto T = cls.monad();
  // full hom counts are computed only into X-antichain objects; objects with
  // two adjacent X-slots are never terminal (two parses of their unit-bead
  // expansion) and get a concrete >= 2 witness instead
  std::vector<char> antichain(n, 0);
  for (int i = 0; i < n; ++i) antichain[i] = !cls.has_adjacent_x(objs[i]);
  std::vector<std::map<int, int>> full_counts(n);
  {
    std::vector<int> targets;
    for (int i = 0; i < n; ++i)
      if (antichain[i]) targets.push_back(i);
    auto counted = par_map<std::map<int, int>>((int)targets.size(), [&](int ti) {
      std::map<int, int> cnt;
      for (auto& m : cls.morphisms_into(objs[targets[ti]])) {
        int s = cls.object_index(m.source);
        if (s >= 0) cnt[s]++;
      }
      return cnt;
    });
    for (size_t ti = 0; ti < targets.size(); ++ti)
      full_counts[targets[ti]] = std::move(counted[ti]);
  }
  auto cls_hom_count = [&](const Classifier& c2, const ClsObject& a,
                           const ClsObject& b) { return (int)c2.hom(a, b).size(); };

  std::vector<ComponentReport> out;
  for (auto& [root, members] : comp) {
    ComponentReport rep;
    for (int i : members) rep.members.push_back(objs[i]);
    bool nullary_free = !T->has_nullary_ops();
    bool any_self_auto = false;
    bool any_positive = false;  // a hom count >= 2, an exact obstruction
    std::set<int> refuted;
    for (int t : members) {
      ComponentReport::Refutation refut;
      refut.candidate = objs[t];
      refut.hom_count = -1;
      if (!antichain[t]) {
        // find the bead collision: two parallel morphisms at small delta
        bool found = false;
        for (int delta = 1; delta <= 4 && !found; ++delta) {
          std::map<int, int> cnt;
          for (auto& m : cls.morphisms_into(objs[t], delta)) {
            int s = cls.object_index(m.source);
            if (s >= 0 && ++cnt[s] >= 2) {
              refut.witness = objs[s];
              refut.hom_count = cls_hom_count(cls, objs[s], objs[t]);
              found = true;
              break;
            }
          }
        }
        if (!found) {
          // bound too tight to exhibit the bead inside it; still not a
          // candidate, record without witness
          refut.witness = objs[t];
          refut.hom_count = -1;
        } else {
          any_positive = true;
          if (cls.object_index(refut.witness) == t) any_self_auto = true;
        }
        rep.refutations.push_back(refut);
        refuted.insert(t);
        continue;
      }
      auto& cnt = full_counts[t];
      bool cand = true;
      for (int a : members) {
        int c = cnt.count(a) ? cnt[a] : 0;
        if (c != 1) {
          cand = false;
          refut.witness = objs[a];
          refut.hom_count = c;
          if (c >= 2) any_positive = true;
          if (a == t && c >= 2) any_self_auto = true;
          break;
        }
      }
      if (cand) rep.terminal_candidates.push_back(objs[t]);
      else {
        rep.refutations.push_back(refut);
        refuted.insert(t);
      }
    }
    // Closure: for a nullary-free monad every morphism weakly shrinks, so a
    // terminal object would already be enumerated and verified; otherwise
    // apply the bead analysis: only X-slot antichains can be terminal, and
    // when every antichain member has at most one X-slot (each refuted or
    // the candidate), candidates are complete.
    if (nullary_free) {
      rep.closed = true;
    } else {
      bool bead_complete = true;
      for (int t : members) {
        const ClsObject& o = objs[t];
        int xslots = 0;
        for (char c : o.col)
          if (c == 'X') ++xslots;
        if (antichain[t] && xslots >= 2) {
          bead_complete = false;  // an X-antichain member beyond single-X
          break;
        }
        if (antichain[t] && xslots <= 1 && !refuted.count(t) &&
            std::find_if(rep.terminal_candidates.begin(), rep.terminal_candidates.end(),
                         [&](const ClsObject& c2) { return c2 == o; }) ==
                rep.terminal_candidates.end())
          bead_complete = false;
      }
      rep.closed = bead_complete && any_positive;
    }
    if (rep.terminal_candidates.size() == 1) {
      rep.verdict = "unique-terminal";
    } else if (rep.terminal_candidates.empty()) {
      rep.verdict = rep.closed
                        ? (any_self_auto ? "automorphism-obstruction"
                                         : "no-terminal-witness")
                        : "inconclusive";
    } else {
      // several candidates: terminal up to isomorphism when they are
      // pairwise uniquely isomorphic (the category is still a coproduct of
      // categories with terminal object)
      bool mutually_iso = true;
      for (auto& t1 : rep.terminal_candidates)
        for (auto& t2 : rep.terminal_candidates) {
          if (t1 == t2) continue;
          if (cls.hom(t1, t2).size() != 1) mutually_iso = false;
        }
      rep.verdict = mutually_iso ? "unique-terminal" : "inconclusive";
    }
    out.push_back(std::move(rep));
  }
  return out;
}

TameReport tame_report(const MonadPtr& T, int bound) {
  Classifier cls(T, ClsKind::Semifree, bound);
  TameReport rep;
  rep.comps = components(cls);
  bool all_have = true, unique_ok = true;
  const ComponentReport* obstruction = nullptr;
  for (auto& c : rep.comps) {
    if (c.verdict == "no-terminal-witness" || c.verdict == "automorphism-obstruction")
      if (!obstruction) obstruction = &c;
    if (c.terminal_candidates.empty()) all_have = false;
    // a closed component that is neither resolved nor refuted blocks tameness
    if (c.closed && c.verdict == "inconclusive") unique_ok = false;
  }
  if (obstruction) {
    rep.verdict = "not-tame";
    std::ostringstream os;
    os << "component of ";
    if (obstruction->members.empty()) os << "?";
    else {
      auto& o = obstruction->members[0];
      os << T->op_key(o.op) << "[" << std::string(o.col.begin(), o.col.end()) << "]";
    }
    os << " admits no terminal object";
    rep.detail = os.str();
  } else if (unique_ok) {
    // no obstruction anywhere; components without a candidate are truncation
    // artifacts (their terminals exceed the bound), recorded as such
    rep.verdict = "tame-at-bound";
    if (!all_have)
      rep.detail = "some components are truncated at the bound; their terminals "
                   "exceed it";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

Pi0Polynomial pi0_polynomial(const MonadPtr& T, int bound) {
  auto rep = tame_report(T, bound);
  if (rep.verdict != "tame-at-bound")
    throw std::invalid_argument("pi0_polynomial: monad is not tame at this bound");
  Pi0Polynomial out;
  for (auto& c : rep.comps)
    if (!c.terminal_candidates.empty())
      out.terminals.push_back(c.terminal_candidates.front());
  return out;
}

// ---------- extension filtration ----------

namespace {

// morphisms of the ho subcategory (T+2-flavour): X-slot data with all-X
// colourings and no f pullbacks
bool is_ho(const ClsMorphism& m) {
  for (auto& e : m.data) {
    if (e.use_f) return false;
    for (char c : e.col)
      if (c != 'X') return false;
  }
  return true;
}

int count_f(const ClsMorphism& m) {
  int n = 0;
  for (auto& e : m.data)
    if (e.use_f) ++n;
  return n;
}

// F-generator: exactly one f pullback, everything else the identity
bool is_f_generator(const Classifier& cls, const ClsMorphism& m) {
  if (count_f(m) != 1) return false;
  for (size_t i = 0; i < m.data.size(); ++i) {
    auto& e = m.data[i];
    if (m.target.col[i] == 'X') {
      if (!cls.monad()->is_unit(e.op)) return false;
      for (char c : e.col)
        if (c != 'X') return false;
    }
  }
  return true;
}

// G-generator: one X-slot receives the K-coloured unit, others identities
bool is_g_generator(const Classifier& cls, const ClsMorphism& m) {
  if (count_f(m) != 0) return false;
  int gs = 0;
  for (size_t i = 0; i < m.data.size(); ++i) {
    auto& e = m.data[i];
    if (m.target.col[i] != 'X') continue;
    if (!cls.monad()->is_unit(e.op)) return false;
    int ks = 0;
    for (char c : e.col)
      if (c == 'K') ++ks;
    if (ks > 1) return false;
    gs += ks;
  }
  return gs == 1;
}

}  // namespace

ExtensionFiltration extension_filtration(const MonadPtr& T, int bound) {
  ExtensionFiltration out;
  Classifier ext(T, ClsKind::Extension, bound);
  auto& objs = ext.objects();
  int n = (int)objs.size();
  // single-slot generators suffice for connectivity and for the generator
  // analyses below; full hom counts are computed on demand
  auto into = par_map<std::vector<ClsMorphism>>(
      n, [&](int i) { return ext.morphisms_into(objs[i], std::nullopt, true); });

  // ho components and terminals
  UF uf(n);
  for (int i = 0; i < n; ++i)
    for (auto& m : into[i])
      if (is_ho(m)) {
        int s = ext.object_index(m.source);
        if (s >= 0) uf.unite(s, i);
      }
  std::map<int, std::vector<int>> comp;
  for (int i = 0; i < n; ++i) comp[uf.find(i)].push_back(i);
  std::set<int> ts;           // object indices of chosen terminals
  std::set<int> ts_resolved;  // those from components with >= 2 members
  std::set<int> resolved_objects;  // all objects of resolved components
  for (auto& [root, members] : comp) {
    for (int t : members) {
      if (ext.has_adjacent_x(objs[t])) continue;  // bead: never ho-terminal
      std::map<int, int> cnt;
      for (auto& m : ext.morphisms_into(objs[t]))
        if (is_ho(m)) {
          int s = ext.object_index(m.source);
          if (s >= 0) cnt[s]++;
        }
      bool cand = true;
      for (int a : members)
        if ((cnt.count(a) ? cnt[a] : 0) != 1) {
          cand = false;
          break;
        }
      if (cand) {
        ts.insert(t);
        if (members.size() >= 2) {
          ts_resolved.insert(t);
          for (int a : members) resolved_objects.insert(a);
        }
        break;
      }
    }
  }
  if (ts.empty()) {
    out.detail = "no ho-terminal objects found (monad not tame at bound?)";
    out.all_cubes = out.l_final_discrete = out.ts_final = false;
    return out;
  }
  for (int t : ts) {
    out.ts_objects.push_back(objs[t]);
    out.ts_resolved.push_back(ts_resolved.count(t) > 0);
  }

  // W^(k): ts objects of degree k, morphisms between them
  std::map<int, std::vector<int>> by_deg;
  for (int t : ts) by_deg[objs[t].degree()].push_back(t);
  for (auto& [k, members] : by_deg) {
    // hom counts within the degree slice (must be F-composites)
    std::map<std::pair<int, int>, int> homcnt;
    UF wf((int)members.size());
    std::map<int, int> pos;
    for (int i = 0; i < (int)members.size(); ++i) pos[members[i]] = i;
    for (int t : members)
      for (int s : members) {
        if (s == t) continue;
        int cnt = (int)ext.hom(objs[s], objs[t]).size();
        if (cnt > 0) {
          homcnt[{s, t}] = cnt;
          wf.unite(pos[s], pos[t]);
        }
      }
    std::map<int, std::vector<int>> wcomp;
    for (int i = 0; i < (int)members.size(); ++i)
      wcomp[wf.find(i)].push_back(members[i]);
    for (auto& [r, ms] : wcomp) {
      ExtensionFiltration::Cube cube;
      cube.k = k;
      for (int t : ms) cube.objects.push_back(objs[t]);
      // cube test: 2^k objects, type counts binomial, unique homs, boolean
      // interval counts
      bool ok = (int)ms.size() == (1 << k);
      std::map<int, int> by_l;
      for (int t : ms) by_l[objs[t].degree() - objs[t].kcount()]++;
      if (ok)
        for (int l = 0; l <= k && ok; ++l) {
          long long binom = 1;
          for (int x = 0; x < l; ++x) binom = binom * (k - x) / (x + 1);
          if ((by_l.count(l) ? by_l[l] : 0) != binom) ok = false;
        }
      if (ok)
        for (int a : ms)
          for (int b : ms) {
            int c = homcnt.count({a, b}) ? homcnt[{a, b}] : 0;
            if (c > 1) ok = false;
          }
      if (ok) {
        // up-sets have size 2^(#K)
        for (int a : ms) {
          int up = 0;
          for (int b : ms)
            if ((homcnt.count({a, b}) ? homcnt[{a, b}] : 0) == 1) ++up;
          if (up != (1 << objs[a].kcount())) ok = false;
        }
      }
      cube.is_cube = ok;
      if (!ok) out.all_cubes = false;
      out.cubes.push_back(cube);
      // L^(k) discrete and final: the all-L objects of the cube are maxima
      for (int a : ms)
        if (objs[a].kcount() == 0)
          for (int b : ms)
            if (a != b && objs[b].kcount() == 0 &&
                (homcnt.count({a, b}) ? homcnt[{a, b}] : 0) > 0)
              out.l_final_discrete = false;
      int tops = 0;
      for (int b : ms)
        if (objs[b].kcount() == 0) ++tops;
      if (tops != 1 && (int)ms.size() == (1 << k)) out.l_final_discrete = false;
    }
  }

  // ts final in the whole classifier: undercategory a/ts non-empty and
  // connected, checked for objects of resolved ho-components (objects of
  // truncated components have their canonical target beyond the bound)
  for (int a = 0; a < n && out.ts_final; ++a) {
    if (!resolved_objects.count(a)) continue;
    // morphisms a -> t for t in ts
    std::vector<ClsMorphism> under;
    for (int t : ts)
      for (auto& m : ext.hom(objs[a], objs[t])) under.push_back(m);
    if (under.empty()) {
      out.ts_final = false;
      out.detail = "undercategory empty at " + ext.object_text(objs[a]);
      break;
    }
    // connectivity: edges h: t1 -> t2 in ts with h . f == g
    UF cu((int)under.size());
    for (size_t i = 0; i < under.size(); ++i)
      for (size_t j = 0; j < under.size(); ++j) {
        if (i == j) continue;
        int t1 = ext.object_index(under[i].target);
        int t2 = ext.object_index(under[j].target);
        if (!ts.count(t1) || !ts.count(t2)) continue;
        for (auto& h : ext.hom(objs[t1], objs[t2])) {
          try {
            auto c2 = ext.compose(h, under[i]);
            if (c2 == under[j]) cu.unite((int)i, (int)j);
          } catch (...) {
          }
        }
      }
    std::set<int> roots;
    for (size_t i = 0; i < under.size(); ++i) roots.insert(cu.find((int)i));
    if (roots.size() > 1) {
      out.ts_final = false;
      out.detail = "undercategory disconnected at " + ext.object_text(objs[a]);
    }
  }

  // F/G square relations on bounded spans: each span (phi: a->b an F/G
  // generator, psi: a->a' in ho) extends to a commutative square with an
  // F/G generator phi': a'->b' and psi': b->b' in ho
  for (int bidx = 0; bidx < n && out.fg_squares_ok; ++bidx)
    for (auto& phi : into[bidx]) {
      if (!is_f_generator(ext, phi) && !is_g_generator(ext, phi)) continue;
      int a = ext.object_index(phi.source);
      if (a < 0) continue;
      for (int a2 = 0; a2 < n && out.fg_squares_ok; ++a2)
        for (auto& psi : into[a2]) {
          if (ext.object_index(psi.source) != a || !is_ho(psi)) continue;
          bool found = false;
          for (int b2 = 0; b2 < n && !found; ++b2) {
            for (auto& psi2 : ext.hom(objs[bidx], objs[b2])) {
              if (!is_ho(psi2)) continue;
              for (auto& phi2 : ext.hom(objs[a2], objs[b2])) {
                if (is_f_generator(ext, phi) && !is_f_generator(ext, phi2)) continue;
                if (is_g_generator(ext, phi) && !is_g_generator(ext, phi2)) continue;
                try {
                  if (ext.compose(psi2, phi) == ext.compose(phi2, psi)) {
                    found = true;
                    break;
                  }
                } catch (...) {
                }
              }
              if (found) break;
            }
          }
          if (!found) {
            out.fg_squares_ok = false;
            out.detail = "F/G square fails at " + ext.object_text(objs[a]);
            break;
          }
        }
    }
  return out;
}

// ---------- diamond lemma ----------

DiamondReport diamond_check(const Classifier& cls,
                            const std::function<long long(const ClsObject&)>& dim) {
  DiamondReport rep;
  auto& objs = cls.objects();
  int n = (int)objs.size();
  // single-slot morphisms already generate the category
  auto into = par_map<std::vector<ClsMorphism>>(
      n, [&](int i) { return cls.morphisms_into(objs[i], std::nullopt, true); });
  // identity removal and generator detection
  auto is_id = [&](const ClsMorphism& m) { return m == cls.identity(m.target); };
  // all non-identity morphisms grouped by (source, target)
  std::map<std::pair<int, int>, std::vector<ClsMorphism>> arrows;
  for (int t = 0; t < n; ++t)
    for (auto& m : into[t]) {
      if (is_id(m)) continue;
      int s = cls.object_index(m.source);
      if (s < 0) continue;
      arrows[{s, t}].push_back(m);
    }
  // generators: arrows admitting no factorization through a third object
  auto factors = [&](const ClsMorphism& m) {
    int s = cls.object_index(m.source), t = cls.object_index(m.target);
    for (int c = 0; c < n; ++c) {
      if (c == s || c == t) continue;
      auto it1 = arrows.find({s, c});
      auto it2 = arrows.find({c, t});
      if (it1 == arrows.end() || it2 == arrows.end()) continue;
      for (auto& m1 : it1->second)
        for (auto& m2 : it2->second) {
          try {
            if (cls.compose(m2, m1) == m) return true;
          } catch (...) {
          }
        }
    }
    return false;
  };
  std::map<std::pair<int, int>, std::vector<ClsMorphism>> gens;
  for (auto& [st, ms] : arrows)
    for (auto& m : ms)
      if (!factors(m)) gens[st].push_back(m);

  // (i) parallel generators equal; a non-identity self-generator is parallel
  // to the identity and already breaks directedness. Automorphism witnesses
  // are reported in preference to plain parallel pairs.
  for (auto& [st, ms] : gens) {
    bool self = st.first == st.second && !ms.empty();
    bool par = ms.size() > 1;
    if (!self && !par) continue;
    rep.parallel_ok = false;
    if (self) {
      rep.witness = "parallel automorphism at " + cls.object_text(objs[st.first]);
      break;
    }
    if (rep.witness.empty())
      rep.witness = "parallel generators " + cls.object_text(objs[st.first]) +
                    " -> " + cls.object_text(objs[st.second]);
  }
  // directedness
  if (dim)
    for (auto& [st, ms] : gens)
      if (!ms.empty() && dim(objs[st.second]) <= dim(objs[st.first])) {
        rep.directed_ok = false;
        if (rep.witness.empty())
          rep.witness = "dimension does not increase along " +
                        cls.object_text(objs[st.first]) + " -> " +
                        cls.object_text(objs[st.second]);
        break;
      }
  // (ii) spans complete to commutative squares
  for (auto& [st1, ms1] : gens) {
    for (auto& [st2, ms2] : gens) {
      if (st1.first != st2.first) continue;
      for (auto& phi : ms1)
        for (auto& psi : ms2) {
          if (phi == psi) continue;
          bool found = false;
          // codomain candidates: any object
          for (int c = 0; c < n && !found; ++c) {
            // phi*: st2.second -> c, psi*: st1.second -> c (generators or id)
            std::vector<ClsMorphism> from_u, from_w;
            if (c == st2.second) from_u.push_back(cls.identity(objs[c]));
            if (c == st1.second) from_w.push_back(cls.identity(objs[c]));
            auto itu = gens.find({st2.second, c});
            if (itu != gens.end())
              for (auto& m : itu->second) from_u.push_back(m);
            auto itw = gens.find({st1.second, c});
            if (itw != gens.end())
              for (auto& m : itw->second) from_w.push_back(m);
            for (auto& mu : from_u)
              for (auto& mw : from_w) {
                try {
                  if (cls.compose(mu, psi) == cls.compose(mw, phi)) {
                    found = true;
                    break;
                  }
                } catch (...) {
                }
              }
          }
          if (!found) {
            rep.spans_ok = false;
            if (rep.witness.empty())
              rep.witness = "span at " + cls.object_text(objs[st1.first]) +
                            " has no completing cospan";
          }
        }
    }
  }
  // conclusion check: success implies unique terminal per component
  if (rep.parallel_ok && rep.spans_ok && rep.directed_ok) {
    auto comps = components(cls, false);
    for (auto& c : comps)
      if (c.terminal_candidates.size() != 1) rep.terminal_match = false;
  }
  return rep;
}

std::function<long long(const ClsObject&)> default_dimension(
    const Classifier& cls, const std::function<long long(const ClsObject&)>& tie) {
  auto T = cls.monad();
  return [T, tie](const ClsObject& o) -> long long {
    long long base = -(long long)T->size(o.op) * 1000000;
    return base + (tie ? tie(o) : 0);
  };
}

// ---------- certificates ----------

std::string tame_certificate_json(const MonadPtr& T, int bound, const TameReport& rep) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["monad"] = T->name();
  j["bound"] = bound;
  j["verdict"] = rep.verdict;
  j["detail"] = rep.detail;
  Classifier cls(T, ClsKind::Semifree, 0);
  auto obj_json = [&](const ClsObject& o) {
    nlohmann::json x;
    x["op"] = T->op_key(o.op);
    x["col"] = std::string(o.col.begin(), o.col.end());
    return x;
  };
  auto comps = nlohmann::json::array();
  for (auto& c : rep.comps) {
    nlohmann::json cj;
    cj["closed"] = c.closed;
    cj["verdict"] = c.verdict;
    cj["size"] = c.members.size();
    auto mem = nlohmann::json::array();
    for (auto& m : c.members) mem.push_back(obj_json(m));
    cj["members"] = mem;
    auto cands = nlohmann::json::array();
    for (auto& t : c.terminal_candidates) cands.push_back(obj_json(t));
    cj["terminal_candidates"] = cands;
    auto refs = nlohmann::json::array();
    for (auto& r : c.refutations) {
      nlohmann::json rj;
      rj["candidate"] = obj_json(r.candidate);
      rj["witness"] = obj_json(r.witness);
      rj["hom_count"] = r.hom_count;
      refs.push_back(rj);
    }
    cj["refutations"] = refs;
    comps.push_back(cj);
  }
  j["components"] = comps;
  return j.dump(2);
}

std::string verify_certificate(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  auto T = builtin(j.at("monad").get<std::string>());
  int bound = j.at("bound").get<int>();
  Classifier cls(T, ClsKind::Semifree, bound);
  // index ops by key
  std::map<std::string, OpId> by_key;
  for (OpId b : T->enumerate(bound)) by_key[T->op_key(b)] = b;
  auto parse_obj = [&](const nlohmann::json& x) {
    ClsObject o;
    o.op = by_key.at(x.at("op").get<std::string>());
    auto s = x.at("col").get<std::string>();
    o.col.assign(s.begin(), s.end());
    return o;
  };
  for (auto& cj : j.at("components")) {
    for (auto& rj : cj.at("refutations")) {
      ClsObject cand = parse_obj(rj.at("candidate"));
      ClsObject wit = parse_obj(rj.at("witness"));
      int expect = rj.at("hom_count").get<int>();
      int got = (int)cls.hom(wit, cand).size();
      if (got != expect)
        return "hom(" + cls.object_text(wit) + ", " + cls.object_text(cand) +
               ") = " + std::to_string(got) + ", certificate says " +
               std::to_string(expect);
    }
    for (auto& tj : cj.at("terminal_candidates")) {
      ClsObject t = parse_obj(tj);
      for (auto& mj : cj.at("members")) {
        ClsObject a = parse_obj(mj);
        if ((int)cls.hom(a, t).size() != 1)
          return "claimed terminal " + cls.object_text(t) + " fails against " +
                 cls.object_text(a);
      }
    }
  }
  return "";
}

}  // namespace polymnd
