#include "polymnd/algebra.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace polymnd {

namespace {

struct UF {
  std::vector<int> p;
  explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

// ---------- free algebras ----------

FreeAlgebra FreeAlgebra::make(const MonadPtr& T, const Collection& K, int bound) {
  FreeAlgebra fa;
  fa.T = T;
  fa.K = K;
  fa.bound = bound;
  fa.carrier = eval(T, K, bound);
  return fa;
}

int FreeAlgebra::find(const std::string& colour, const EvalElement& e) const {
  auto it = carrier.find(colour);
  if (it == carrier.end()) return -1;
  for (size_t i = 0; i < it->second.size(); ++i)
    if (it->second[i].op == e.op && it->second[i].assignment == e.assignment)
      return (int)i;
  return -1;
}

FinSetAlgebra FreeAlgebra::as_algebra() const {
  FinSetAlgebra A;
  A.T = T;
  for (auto& [c, elems] : carrier) {
    std::vector<std::string> names;
    for (auto& e : elems) {
      std::string nm = T->op_key(e.op) + "(";
      for (int a : e.assignment) nm += std::to_string(a) + ",";
      names.push_back(nm + ")");
    }
    A.carrier[c] = names;
  }
  auto T2 = T;
  auto self = std::make_shared<FreeAlgebra>(*this);
  A.act = [T2, self](OpId b, const std::vector<int>& args) -> int {
    auto srcs = T2->sources(b);
    std::vector<OpId> argops(args.size());
    for (size_t i = 0; i < args.size(); ++i)
      argops[i] = self->carrier.at(srcs[i]).at(args[i]).op;
    auto r = T2->substitute(b, argops);
    EvalElement e;
    e.op = r.op;
    e.assignment.resize(r.slot_origin.size());
    for (size_t t = 0; t < r.slot_origin.size(); ++t) {
      auto [i, j] = r.slot_origin[t];
      e.assignment[t] = self->carrier.at(srcs[i]).at(args[i]).assignment[j];
    }
    int idx = self->find(T2->colour_of(r.op), e);
    if (idx < 0)
      throw std::out_of_range("free algebra action leaves the truncation bound");
    return idx;
  };
  return A;
}

AlgebraLawReport check_algebra_laws(const FinSetAlgebra& A, int bound) {
  AlgebraLawReport rep;
  auto T = A.T;
  std::map<std::string, std::vector<OpId>> by_colour;
  for (OpId b : T->enumerate(bound)) by_colour[T->colour_of(b)].push_back(b);
  for (OpId b : T->enumerate(bound)) {
    auto srcs = T->sources(b);
    int k = (int)srcs.size();
    bool feasible = true;
    for (auto& c : srcs)
      if (A.size_at(c) == 0) feasible = false;
    if (!feasible) continue;
    // unit law
    if (A.size_at(T->colour_of(b)) > 0) {
      for (int x = 0; x < A.size_at(T->colour_of(b)); ++x) {
        int y = A.act(T->unit(T->colour_of(b)), {x});
        if (y != x) {
          rep.ok = false;
          rep.witness = "unit action is not the identity at " + T->colour_of(b);
          return rep;
        }
      }
    }
    // associativity against one-step composites, all element tuples
    std::vector<OpId> bs(k);
    std::function<void(int)> rec = [&](int i) {
      if (!rep.ok) return;
      if (i == k) {
        SubstResult r;
        try {
          r = T->substitute(b, bs);
        } catch (...) {
          return;
        }
        if (T->size(r.op) > bound) return;
        // element tuples for the composite
        auto csrc = T->sources(r.op);
        std::vector<int> tup(csrc.size(), 0);
        std::function<void(size_t)> et = [&](size_t s) {
          if (!rep.ok) return;
          if (s == csrc.size()) {
            // route 1: direct action of the composite
            int v1;
            try {
              v1 = A.act(r.op, tup);
            } catch (...) {
              return;
            }
            // route 2: act inner then outer
            std::vector<int> mid(k);
            for (int ii = 0; ii < k; ++ii) {
              std::vector<int> sub;
              for (size_t t = 0; t < r.slot_origin.size(); ++t)
                if (r.slot_origin[t].first == ii) sub.push_back(tup[t]);
              mid[ii] = A.act(bs[ii], sub);
            }
            int v2 = A.act(b, mid);
            if (v1 != v2) {
              rep.ok = false;
              rep.witness = "action incompatible with substitution at " + T->op_key(b);
            }
            return;
          }
          for (int x = 0; x < A.size_at(csrc[s]); ++x) {
            tup[s] = x;
            et(s + 1);
          }
        };
        et(0);
        return;
      }
      for (OpId c : by_colour[srcs[i]]) {
        bs[i] = c;
        rec(i + 1);
      }
    };
    rec(0);
    if (!rep.ok) return rep;
  }
  return rep;
}

// ---------- colimits ----------

std::pair<int, std::vector<std::vector<int>>> finset_colimit(const FinSetDiagram& d) {
  std::vector<int> offset(d.sizes.size() + 1, 0);
  for (size_t i = 0; i < d.sizes.size(); ++i) offset[i + 1] = offset[i] + d.sizes[i];
  UF uf(offset.back());
  for (auto& a : d.arrows)
    for (int e = 0; e < d.sizes[a.src]; ++e)
      uf.unite(offset[a.src] + e, offset[a.dst] + a.map[e]);
  std::map<int, int> cls;
  std::vector<std::vector<int>> out(d.sizes.size());
  for (size_t i = 0; i < d.sizes.size(); ++i) {
    out[i].resize(d.sizes[i]);
    for (int e = 0; e < d.sizes[i]; ++e) {
      int r = uf.find(offset[i] + e);
      auto it = cls.find(r);
      if (it == cls.end()) it = cls.emplace(r, (int)cls.size()).first;
      out[i][e] = it->second;
    }
  }
  return {(int)cls.size(), out};
}

template <class K>
int vect_colimit_dim(const VectDiagram<K>& d, const K& one, const K& zero) {
  std::vector<int> offset(d.dims.size() + 1, 0);
  for (size_t i = 0; i < d.dims.size(); ++i) offset[i + 1] = offset[i] + d.dims[i];
  int total = offset.back();
  int nrel = 0;
  for (auto& a : d.arrows) nrel += d.dims[a.src];
  Mat<K> rel(nrel, total, zero);
  int row = 0;
  for (auto& a : d.arrows)
    for (int e = 0; e < d.dims[a.src]; ++e, ++row) {
      rel.at(row, offset[a.src] + e) = rel.at(row, offset[a.src] + e) + one;
      for (int f = 0; f < d.dims[a.dst]; ++f) {
        K v = a.map.at(e, f);
        rel.at(row, offset[a.dst] + f) = rel.at(row, offset[a.dst] + f) - v;
      }
    }
  return total - rank_of(rel);
}

template int vect_colimit_dim<Rational>(const VectDiagram<Rational>&, const Rational&,
                                        const Rational&);
template int vect_colimit_dim<Fp>(const VectDiagram<Fp>&, const Fp&, const Fp&);

// ---------- functor evaluation ----------

namespace {

int slot_carrier_size(const Classifier& cls, const ClsObject& a, int slot,
                      const ExtData& d) {
  auto srcs = cls.monad()->sources(a.op);
  const std::string& c = srcs[slot];
  if (a.col[slot] == 'X') return d.R.size_at(c);
  if (a.col[slot] == 'K') {
    auto it = d.Kc.find(c);
    return it == d.Kc.end() ? 0 : (int)it->second.size();
  }
  auto it = d.Lc.find(c);
  return it == d.Lc.end() ? 0 : (int)it->second.size();
}

}  // namespace

std::vector<std::vector<int>> functor_elements(const Classifier& cls, const ClsObject& a,
                                               const ExtData& d) {
  int k = (int)a.col.size();
  std::vector<std::vector<int>> out;
  std::vector<int> tup(k, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      out.push_back(tup);
      return;
    }
    int n = slot_carrier_size(cls, a, i, d);
    for (int x = 0; x < n; ++x) {
      tup[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  if (k == 0) { /* single empty tuple already pushed */ }
  return out;
}

std::vector<int> functor_apply(const Classifier& cls, const ClsMorphism& m,
                               const std::vector<int>& elem, const ExtData& d) {
  auto T = cls.monad();
  std::vector<std::pair<int, int>> origin;
  ClsObject src = cls.apply(m.target, m.data, nullptr, &origin);
  if (!(src == m.source)) throw std::runtime_error("functor_apply: data mismatch");
  // inverse origin: (target slot i, data slot j) -> source slot t
  std::map<std::pair<int, int>, int> at;
  for (int t = 0; t < (int)origin.size(); ++t) at[origin[t]] = t;
  auto tsrcs = T->sources(m.target.op);
  std::vector<int> out(m.target.col.size(), 0);
  for (int i = 0; i < (int)m.target.col.size(); ++i) {
    if (m.target.col[i] == 'K') {
      out[i] = elem[at.at({i, 0})];
    } else if (m.target.col[i] == 'L') {
      int t = at.at({i, 0});
      if (m.data[i].use_f) out[i] = d.u(tsrcs[i], elem[t]);
      else out[i] = elem[t];
    } else {
      // X-slot: apply alpha to K-coloured entries of the data op, then act
      OpId dd = m.data[i].op;
      auto dsrcs = T->sources(dd);
      std::vector<int> args(dsrcs.size());
      for (int j = 0; j < (int)dsrcs.size(); ++j) {
        int t = at.at({i, j});
        if (j < (int)m.data[i].col.size() && m.data[i].col[j] == 'K')
          args[j] = d.alpha(dsrcs[j], elem[t]);
        else
          args[j] = elem[t];
      }
      out[i] = d.R.act(dd, args);
    }
  }
  return out;
}

// ---------- semi-free coproducts ----------

SemifreeResult semifree_coproduct(const FinSetAlgebra& X,
                                  const std::map<std::string, std::vector<std::string>>& K,
                                  int bound) {
  SemifreeResult res;
  Classifier cls(X.T, ClsKind::Semifree, bound);
  ExtData d;
  d.R = X;
  d.Kc = K;
  d.u = [](const std::string&, int x) { return x; };
  d.alpha = [](const std::string&, int x) { return x; };
  auto comps = components(cls);
  auto rep_verdict = tame_report(X.T, bound);
  res.tame = rep_verdict.verdict == "tame-at-bound";
  res.two_path_ok = true;
  // completeness by K-degree
  res.complete_upto = 1 << 20;
  for (auto& c : comps) {
    int mindeg = 1 << 20;
    for (auto& m : c.members) mindeg = std::min(mindeg, m.degree());
    if (c.terminal_candidates.empty())
      res.complete_upto = std::min(res.complete_upto, mindeg - 1);
  }
  for (auto& c : comps) {
    if (c.terminal_candidates.empty()) continue;
    auto& t = c.terminal_candidates.front();
    long long tv = 1;
    for (size_t i = 0; i < t.col.size(); ++i) tv *= slot_carrier_size(cls, t, (int)i, d);
    std::string colour = cls.component_colour(t);
    res.terminal_counts[colour] += (int)tv;
    res.counts_by_degree[t.degree()] += tv;
    // colimit over the component, same colour throughout
    FinSetDiagram dia;
    std::map<std::string, int> pos;
    std::vector<std::vector<std::vector<int>>> elems;
    for (size_t i = 0; i < c.members.size(); ++i) {
      pos[cls.object_key(c.members[i])] = (int)i;
      elems.push_back(functor_elements(cls, c.members[i], d));
      dia.sizes.push_back((int)elems.back().size());
    }
    for (size_t bi = 0; bi < c.members.size(); ++bi)
      for (auto& m : cls.morphisms_into(c.members[bi], std::nullopt, true)) {
        auto it = pos.find(cls.object_key(m.source));
        if (it == pos.end()) continue;
        FinSetDiagram::Arrow arr;
        arr.src = it->second;
        arr.dst = (int)bi;
        std::map<std::vector<int>, int> tgt;
        for (size_t e = 0; e < elems[bi].size(); ++e) tgt[elems[bi][e]] = (int)e;
        for (auto& e : elems[it->second])
          arr.map.push_back(tgt.at(functor_apply(cls, m, e, d)));
        dia.arrows.push_back(std::move(arr));
      }
    int colim = finset_colimit(dia).first;
    res.counts[colour] += colim;
    if (colim != (int)tv) res.two_path_ok = false;
  }
  return res;
}

// ---------- pushout filtration ----------

namespace {

struct TsInfo {
  Classifier* cls;
  std::vector<ClsObject> ts;      // resolved terminal objects
  std::vector<int> ts_index;      // indices into cls->objects()
  bool complete = true;           // no low-degree object sits in an unresolved comp
  std::string detail;
};

// resolved ho-terminals of the extension classifier
TsInfo compute_ts(Classifier& ext, int kmax) {
  TsInfo info;
  info.cls = &ext;
  auto& objs = ext.objects();
  int n = (int)objs.size();
  std::vector<std::vector<ClsMorphism>> into(n);
  for (int i = 0; i < n; ++i) into[i] = ext.morphisms_into(objs[i], std::nullopt, true);
  auto is_ho = [](const ClsMorphism& m) {
    for (auto& e : m.data) {
      if (e.use_f) return false;
      for (char c : e.col)
        if (c != 'X') return false;
    }
    return true;
  };
  UF uf(n);
  for (int i = 0; i < n; ++i)
    for (auto& m : into[i])
      if (is_ho(m)) {
        int s = ext.object_index(m.source);
        if (s >= 0) uf.unite(s, i);
      }
  std::map<int, std::vector<int>> comp;
  for (int i = 0; i < n; ++i) comp[uf.find(i)].push_back(i);
  for (auto& [root, members] : comp) {
    int found = -1;
    for (int t : members) {
      if (ext.has_adjacent_x(objs[t])) continue;
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
        found = t;
        break;
      }
    }
    bool resolved = found >= 0 && (members.size() >= 2 || objs[found].degree() == 0 ||
                                   ext.monad()->arity(objs[found].op) == 0);
    if (resolved) {
      info.ts.push_back(objs[found]);
      info.ts_index.push_back(found);
    } else {
      // a component without a usable terminal: only a problem if it holds
      // low-degree objects that the filtration stages would need
      for (int a : members)
        if (objs[a].degree() <= kmax) {
          info.complete = false;
          info.detail = "unresolved component at degree <= kmax near " +
                        ext.object_text(objs[a]);
        }
    }
  }
  return info;
}

std::map<std::string, int> colim_over(const Classifier& cls,
                                      const std::vector<ClsObject>& subset,
                                      const ExtData& d,
                                      std::map<std::string, std::vector<std::pair<int, int>>>*
                                          class_of = nullptr) {
  // per colour: colimit over the full subcategory on `subset`
  std::map<std::string, std::vector<int>> by_colour;
  for (int i = 0; i < (int)subset.size(); ++i)
    by_colour[cls.component_colour(subset[i])].push_back(i);
  std::map<std::string, int> counts;
  for (auto& [colour, idxs] : by_colour) {
    FinSetDiagram dia;
    std::map<int, int> pos;
    std::vector<std::vector<std::vector<int>>> elems(idxs.size());
    for (size_t i = 0; i < idxs.size(); ++i) {
      pos[idxs[i]] = (int)i;
      elems[i] = functor_elements(cls, subset[idxs[i]], d);
      dia.sizes.push_back((int)elems[i].size());
    }
    for (size_t bi = 0; bi < idxs.size(); ++bi) {
      for (size_t ai = 0; ai < idxs.size(); ++ai) {
        for (auto& m : cls.hom(subset[idxs[ai]], subset[idxs[bi]])) {
          FinSetDiagram::Arrow arr;
          arr.src = (int)ai;
          arr.dst = (int)bi;
          std::map<std::vector<int>, int> tgt_index;
          for (size_t e = 0; e < elems[bi].size(); ++e) tgt_index[elems[bi][e]] = (int)e;
          for (auto& e : elems[ai])
            arr.map.push_back(tgt_index.at(functor_apply(cls, m, e, d)));
          dia.arrows.push_back(std::move(arr));
        }
      }
    }
    auto [ncls, classes] = finset_colimit(dia);
    counts[colour] = ncls;
    if (class_of)
      for (size_t i = 0; i < idxs.size(); ++i)
        for (int e = 0; e < dia.sizes[i]; ++e)
          (*class_of)[colour].push_back({idxs[(int)i], classes[i][e]});
  }
  return counts;
}

}  // namespace

FiltrationResult pushout_filtration(const PushoutProblem& prob, int kmax, int bound) {
  FiltrationResult out;
  Classifier ext(prob.R.T, ClsKind::Extension, bound);
  ExtData d;
  d.R = prob.R;
  d.Kc = prob.K;
  d.Lc = prob.L;
  d.u = prob.u;
  d.alpha = prob.alpha;
  TsInfo info = compute_ts(ext, kmax);
  if (!info.complete) {
    out.squares_ok = false;
    out.detail = info.detail;
    return out;
  }
  for (int k = 0; k <= kmax; ++k) {
    FiltrationStage st;
    st.k = k;
    std::vector<ClsObject> tsk;
    for (auto& t : info.ts)
      if (t.degree() <= k) tsk.push_back(t);
    st.P = colim_over(ext, tsk, d);

    if (k >= 1) {
      std::vector<ClsObject> wk, qk, lk;
      for (auto& t : info.ts)
        if (t.degree() == k) {
          wk.push_back(t);
          if (t.kcount() > 0) qk.push_back(t);
          else lk.push_back(t);
        }
      st.Q = colim_over(ext, qk, d);
      for (auto& l : lk)
        st.L[ext.component_colour(l)] += (int)functor_elements(ext, l, d).size();

      // pushout of the square: (P_{k-1} u L_k) / (alpha(q) ~ w(q))
      // realize elementwise
      std::vector<ClsObject> tsk1;
      for (auto& t : info.ts)
        if (t.degree() <= k - 1) tsk1.push_back(t);
      // recompute P_{k-1} with class maps
      std::map<std::string, std::vector<std::pair<int, int>>> pclasses;
      auto pcounts = colim_over(ext, tsk1, d, &pclasses);
      // build the identification structure per colour
      std::map<std::string, int> push_counts;
      for (auto& [colour, pc] : pcounts) {
        // elements: P_{k-1} classes and L_k elements
        int np = pc;
        int nl = st.L.count(colour) ? st.L[colour] : 0;
        UF uf(np + nl);
        // L_k element index: (object order among lk of colour, element)
        std::map<std::string, int> dummy;
        (void)dummy;
        // map from Q elements
        for (auto& q : qk) {
          if (ext.component_colour(q) != colour) continue;
          auto qelems = functor_elements(ext, q, d);
          for (auto& e : qelems) {
            // w: to the all-L top of the cube: apply u at K slots
            ClsObject top = q;
            std::vector<int> wtup = e;
            auto srcs = ext.monad()->sources(q.op);
            for (size_t i = 0; i < top.col.size(); ++i)
              if (top.col[i] == 'K') {
                top.col[i] = 'L';
                wtup[i] = d.u(srcs[i], e[i]);
              }
            // position of top among lk
            int loff = 0;
            bool found = false;
            for (auto& l : lk) {
              if (ext.component_colour(l) != colour) continue;
              if (l == top) {
                found = true;
                break;
              }
              loff += (int)functor_elements(ext, l, d).size();
            }
            if (!found) throw std::runtime_error("filtration: cube top not in L slice");
            auto tops = functor_elements(ext, top, d);
            int ti = -1;
            for (size_t x = 0; x < tops.size(); ++x)
              if (tops[x] == wtup) ti = (int)x;
            // alpha: replace K entries via alpha, recolour to X, contract to
            // the canonical ts object by the unique ho morphism
            ClsObject ax = q;
            std::vector<int> atup = e;
            for (size_t i = 0; i < ax.col.size(); ++i)
              if (ax.col[i] == 'K') {
                ax.col[i] = 'X';
                atup[i] = d.alpha(srcs[i], e[i]);
              }
            // find the ts^(k-1) object receiving ax via a unique ho morphism
            int pclass = -1;
            for (size_t tj = 0; tj < tsk1.size() && pclass < 0; ++tj) {
              for (auto& m : ext.hom(ax, tsk1[tj])) {
                bool ho = true;
                for (auto& en : m.data) {
                  if (en.use_f) ho = false;
                  for (char cc : en.col)
                    if (cc != 'X') ho = false;
                }
                if (!ho) continue;
                auto img = functor_apply(ext, m, atup, d);
                // class of (tsk1[tj], img)
                auto& pcls = pclasses[colour];
                // element index of img within the object
                auto telems = functor_elements(ext, tsk1[tj], d);
                int ei = -1;
                for (size_t x = 0; x < telems.size(); ++x)
                  if (telems[x] == img) ei = (int)x;
                // find the class entry
                int obj_global = -1;
                for (size_t gg = 0; gg < tsk1.size(); ++gg)
                  if (tsk1[gg] == tsk1[tj]) obj_global = (int)gg;
                (void)obj_global;
                // pclasses stores (object index within colour-order, class)
                // recompute mapping: locate position
                int runidx = 0;
                for (auto& t2 : tsk1) {
                  if (ext.component_colour(t2) != colour) continue;
                  if (t2 == tsk1[tj]) break;
                  runidx += (int)functor_elements(ext, t2, d).size();
                }
                pclass = pcls[runidx + ei].second;
                break;
              }
            }
            if (pclass < 0)
              throw std::runtime_error("filtration: no canonical target for alpha leg");
            if (ti >= 0) uf.unite(pclass, np + loff + ti);
          }
        }
        std::set<int> roots;
        for (int x = 0; x < np + nl; ++x) roots.insert(uf.find(x));
        push_counts[colour] = (int)roots.size();
      }
      st.pushout_check = push_counts;
      for (auto& [colour, v] : st.P) {
        int pv = st.pushout_check.count(colour) ? st.pushout_check[colour] : -1;
        if (pv >= 0 && pv != v) {
          out.squares_ok = false;
          out.detail = "square at degree " + std::to_string(k) + " colour " + colour;
        }
      }
    }
    out.stages.push_back(std::move(st));
  }
  return out;
}

// ---------- term-model oracle ----------

namespace {

struct Term {
  OpId op;
  std::vector<int> leaves;  // encoded: R: 0..|R|-1; K: |R|..; L: |R|+|K|..
};

}  // namespace

OracleResult pushout_oracle(const PushoutProblem& prob, int kcap, int scap) {
  OracleResult res;
  auto T = prob.R.T;
  // leaf ranges per colour
  auto rsize = [&](const std::string& c) { return prob.R.size_at(c); };
  auto ksize = [&](const std::string& c) {
    auto it = prob.K.find(c);
    return it == prob.K.end() ? 0 : (int)it->second.size();
  };
  auto lsize = [&](const std::string& c) {
    auto it = prob.L.find(c);
    return it == prob.L.end() ? 0 : (int)it->second.size();
  };
  // universe
  std::vector<Term> terms;
  std::map<std::string, int> index;
  auto term_key = [&](const Term& t) {
    std::string s = std::to_string(t.op) + ":";
    for (int l : t.leaves) s += std::to_string(l) + ",";
    return s;
  };
  auto kl_degree = [&](const Term& t) {
    auto srcs = T->sources(t.op);
    int deg = 0;
    for (size_t i = 0; i < srcs.size(); ++i)
      if (t.leaves[i] >= rsize(srcs[i])) ++deg;
    return deg;
  };
  auto add_term = [&](const Term& t) -> int {
    auto key = term_key(t);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = (int)terms.size();
    terms.push_back(t);
    index[key] = id;
    return id;
  };
  for (OpId b : T->enumerate(scap)) {
    auto srcs = T->sources(b);
    std::vector<int> tup(srcs.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int deg) {
      if (deg > kcap) return;
      if (i == srcs.size()) {
        add_term({b, tup});
        return;
      }
      int nr = rsize(srcs[i]), nk = ksize(srcs[i]), nl = lsize(srcs[i]);
      for (int x = 0; x < nr + nk + nl; ++x) {
        tup[i] = x;
        rec(i + 1, deg + (x >= nr ? 1 : 0));
      }
    };
    rec(0, 0);
  }
  // relations
  std::vector<std::pair<int, int>> edges;
  // (b) leaf swaps: K-leaf ~ u(K) as L, K-leaf ~ alpha(K) as R
  for (int ti = 0; ti < (int)terms.size(); ++ti) {
    auto& t = terms[ti];
    auto srcs = T->sources(t.op);
    for (size_t i = 0; i < srcs.size(); ++i) {
      int nr = rsize(srcs[i]), nk = ksize(srcs[i]);
      int v = t.leaves[i];
      if (v >= nr && v < nr + nk) {
        int kidx = v - nr;
        Term t2 = t;
        t2.leaves[i] = nr + nk + prob.u(srcs[i], kidx);
        auto it = index.find(term_key(t2));
        if (it != index.end()) edges.push_back({ti, it->second});
        Term t3 = t;
        t3.leaves[i] = prob.alpha(srcs[i], kidx);
        auto it3 = index.find(term_key(t3));
        if (it3 != index.end()) edges.push_back({ti, it3->second});
      }
    }
  }
  // (a) one-block collapses: composite c(.., d at slot j, ..) with all-R
  // leaves under d collapses to the R-value
  std::map<std::string, std::vector<OpId>> by_colour;
  for (OpId b : T->enumerate(scap)) by_colour[T->colour_of(b)].push_back(b);
  for (OpId c : T->enumerate(scap)) {
    auto csrcs = T->sources(c);
    for (size_t j = 0; j < csrcs.size(); ++j) {
      for (OpId dop : by_colour[csrcs[j]]) {
        if (T->is_unit(dop)) continue;
        std::vector<OpId> args(csrcs.size());
        for (size_t i = 0; i < csrcs.size(); ++i)
          args[i] = i == j ? dop : T->unit(csrcs[i]);
        SubstResult r;
        try {
          r = T->substitute(c, args);
        } catch (...) {
          continue;
        }
        if (T->size(r.op) > scap) continue;
        auto esrcs = T->sources(r.op);
        auto dsrcs = T->sources(dop);
        // enumerate leaves of the composite with the d-block all-R
        std::vector<int> tup(esrcs.size(), 0);
        std::function<void(size_t, int)> rec = [&](size_t i, int deg) {
          if (deg > kcap) return;
          if (i == esrcs.size()) {
            Term big{r.op, tup};
            auto itb = index.find(term_key(big));
            if (itb == index.end()) return;
            // collapse: value of d on its block
            std::vector<int> dargs(dsrcs.size());
            bool allR = true;
            for (size_t t2 = 0; t2 < r.slot_origin.size(); ++t2) {
              auto [ii, jj] = r.slot_origin[t2];
              if (ii == (int)j) {
                if (tup[t2] >= rsize(dsrcs[jj])) allR = false;
                else dargs[jj] = tup[t2];
              }
            }
            if (!allR) return;
            int value = prob.R.act(dop, dargs);
            // the collapsed term: outer c with slot j holding the value
            std::vector<int> small(csrcs.size());
            for (size_t t2 = 0; t2 < r.slot_origin.size(); ++t2) {
              auto [ii, jj] = r.slot_origin[t2];
              if (ii != (int)j) small[ii] = tup[t2];
            }
            small[j] = value;
            Term st{c, small};
            auto its = index.find(term_key(st));
            if (its != index.end()) edges.push_back({itb->second, its->second});
            return;
          }
          int nr = rsize(esrcs[i]), nk = ksize(esrcs[i]), nl = lsize(esrcs[i]);
          for (int x = 0; x < nr + nk + nl; ++x) {
            tup[i] = x;
            rec(i + 1, deg + (x >= nr ? 1 : 0));
          }
        };
        rec(0, 0);
      }
    }
  }
  // per truncation degree: closure within the <= k universe
  std::set<std::string> colours;
  for (auto& t : terms) colours.insert(T->colour_of(t.op));
  for (int k = 0; k <= kcap; ++k) {
    std::vector<int> sub(terms.size(), -1);
    std::vector<int> back;
    for (int i = 0; i < (int)terms.size(); ++i)
      if (kl_degree(terms[i]) <= k) {
        sub[i] = (int)back.size();
        back.push_back(i);
      }
    UF uf((int)back.size());
    for (auto& [a, b] : edges)
      if (sub[a] >= 0 && sub[b] >= 0) uf.unite(sub[a], sub[b]);
    std::map<std::string, std::set<int>> roots;
    for (int i = 0; i < (int)back.size(); ++i)
      roots[T->colour_of(terms[back[i]].op)].insert(uf.find(i));
    for (auto& c : colours) res.counts_by_degree[c].push_back((int)roots[c].size());
  }
  return res;
}

// ---------- exact linear world ----------

namespace {

template <class KF>
struct Ops {
  static KF one();
  static KF zero();
};
template <>
struct Ops<Rational> {
  static Rational one() { return Rational(1); }
  static Rational zero() { return Rational(0); }
};

// tensor product of per-slot carrier dimensions, with bases in row-major
// tuple order; returns tuples for a classifier object
struct VectExt {
  const VectAlgebra* R;
  const std::map<std::string, int>* K;
  const std::map<std::string, int>* L;
  std::function<Mat<Rational>(const std::string&)> u;
  std::function<Mat<Rational>(const std::string&)> alpha;

  int slot_dim(const Classifier& cls, const ClsObject& a, int slot) const {
    auto srcs = cls.monad()->sources(a.op);
    const std::string& c = srcs[slot];
    if (a.col[slot] == 'X') {
      auto it = R->dims.find(c);
      return it == R->dims.end() ? 0 : it->second;
    }
    const auto* coll = a.col[slot] == 'K' ? K : L;
    auto it = coll->find(c);
    return it == coll->end() ? 0 : it->second;
  }
  int value_dim(const Classifier& cls, const ClsObject& a) const {
    int d = 1;
    for (int i = 0; i < (int)a.col.size(); ++i) d *= slot_dim(cls, a, i);
    return d;
  }
  // matrix of the morphism action, value(source) -> value(target)
  Mat<Rational> action(const Classifier& cls, const ClsMorphism& m) const {
    auto T = cls.monad();
    std::vector<std::pair<int, int>> origin;
    ClsObject src = cls.apply(m.target, m.data, nullptr, &origin);
    std::map<std::pair<int, int>, int> at;
    for (int t = 0; t < (int)origin.size(); ++t) at[origin[t]] = t;
    auto tsrcs = T->sources(m.target.op);
    int sdim = value_dim(cls, src), tdim = value_dim(cls, m.target);
    Mat<Rational> out(sdim, tdim, Rational(0));
    // iterate over source basis tuples
    std::vector<int> sdims(src.col.size());
    for (int i = 0; i < (int)src.col.size(); ++i) sdims[i] = slot_dim(cls, src, i);
    std::vector<int> tdims(m.target.col.size());
    for (int i = 0; i < (int)m.target.col.size(); ++i)
      tdims[i] = slot_dim(cls, m.target, i);
    std::vector<int> tup(src.col.size(), 0);
    int srow = 0;
    std::function<void(int)> rec = [&](int i) {
      if (i == (int)src.col.size()) {
        // image: per target slot a VECTOR; accumulate the tensor expansion
        std::vector<std::vector<Rational>> per_slot(m.target.col.size());
        for (int ti = 0; ti < (int)m.target.col.size(); ++ti) {
          if (m.target.col[ti] == 'K') {
            int t = at.at({ti, 0});
            per_slot[ti].assign(tdims[ti], Rational(0));
            per_slot[ti][tup[t]] = Rational(1);
          } else if (m.target.col[ti] == 'L') {
            int t = at.at({ti, 0});
            per_slot[ti].assign(tdims[ti], Rational(0));
            if (m.data[ti].use_f) {
              Mat<Rational> um = u(tsrcs[ti]);
              for (int y = 0; y < tdims[ti]; ++y) per_slot[ti][y] = um.at(tup[t], y);
            } else {
              per_slot[ti][tup[t]] = Rational(1);
            }
          } else {
            OpId dd = m.data[ti].op;
            auto dsrcs = T->sources(dd);
            // build the argument vector per fiber slot; K entries first map
            // through alpha into R
            std::vector<std::vector<Rational>> argvec(dsrcs.size());
            for (int j = 0; j < (int)dsrcs.size(); ++j) {
              int t = at.at({ti, j});
              int rd = R->dims.count(dsrcs[j]) ? R->dims.at(dsrcs[j]) : 0;
              argvec[j].assign(rd, Rational(0));
              if (j < (int)m.data[ti].col.size() && m.data[ti].col[j] == 'K') {
                Mat<Rational> am = alpha(dsrcs[j]);
                for (int y = 0; y < rd; ++y) argvec[j][y] = am.at(tup[t], y);
              } else {
                argvec[j][tup[t]] = Rational(1);
              }
            }
            // apply the action matrix of dd to the tensor of argvec
            Mat<Rational> actm = R->act(dd);
            int prod = 1;
            for (auto& v : argvec) prod *= (int)v.size();
            std::vector<Rational> in(prod, Rational(0));
            // fill tensor coefficients (row-major)
            std::vector<int> ix(argvec.size(), 0);
            std::function<void(int, int, Rational)> fill =
                [&](int jj, int pos, Rational coeff) {
                  if (coeff.is_zero()) return;
                  if (jj == (int)argvec.size()) {
                    in[pos] = in[pos] + coeff;
                    return;
                  }
                  for (int y = 0; y < (int)argvec[jj].size(); ++y)
                    fill(jj + 1, pos * (int)argvec[jj].size() + y,
                         coeff * argvec[jj][y]);
                };
            fill(0, 0, Rational(1));
            per_slot[ti].assign(tdims[ti], Rational(0));
            for (int rr = 0; rr < prod; ++rr) {
              if (in[rr].is_zero()) continue;
              for (int y = 0; y < tdims[ti]; ++y)
                per_slot[ti][y] = per_slot[ti][y] + in[rr] * actm.at(rr, y);
            }
          }
        }
        // expand the tensor product over target slots into the out row
        std::function<void(int, int, Rational)> expand =
            [&](int ti, int pos, Rational coeff) {
              if (coeff.is_zero()) return;
              if (ti == (int)m.target.col.size()) {
                out.at(srow, pos) = out.at(srow, pos) + coeff;
                return;
              }
              for (int y = 0; y < tdims[ti]; ++y)
                expand(ti + 1, pos * tdims[ti] + y, coeff * per_slot[ti][y]);
            };
        expand(0, 0, Rational(1));
        ++srow;
        return;
      }
      for (int x = 0; x < sdims[i]; ++x) {
        tup[i] = x;
        rec(i + 1);
      }
    };
    rec(0);
    return out;
  }
};

}  // namespace

VectFiltrationResult vect_pushout_filtration(const VectPushoutProblem& prob, int kmax,
                                             int bound) {
  VectFiltrationResult out;
  Classifier ext(prob.R.T, ClsKind::Extension, bound);
  VectExt d{&prob.R, &prob.K, &prob.L, prob.u, prob.alpha};
  TsInfo info = compute_ts(ext, kmax);
  if (!info.complete) return out;
  for (int k = 0; k <= kmax; ++k) {
    VectFiltrationStage st;
    st.k = k;
    std::vector<ClsObject> tsk;
    for (auto& t : info.ts)
      if (t.degree() <= k) tsk.push_back(t);
    std::map<std::string, std::vector<int>> by_colour;
    for (int i = 0; i < (int)tsk.size(); ++i)
      by_colour[ext.component_colour(tsk[i])].push_back(i);
    for (auto& [colour, idxs] : by_colour) {
      VectDiagram<Rational> dia;
      std::map<int, int> pos;
      for (size_t i = 0; i < idxs.size(); ++i) {
        pos[idxs[i]] = (int)i;
        dia.dims.push_back(d.value_dim(ext, tsk[idxs[i]]));
      }
      for (size_t bi = 0; bi < idxs.size(); ++bi)
        for (size_t ai = 0; ai < idxs.size(); ++ai)
          for (auto& m : ext.hom(tsk[idxs[ai]], tsk[idxs[bi]])) {
            VectDiagram<Rational>::Arrow arr;
            arr.src = (int)ai;
            arr.dst = (int)bi;
            arr.map = d.action(ext, m);
            dia.arrows.push_back(std::move(arr));
          }
      st.P[colour] = vect_colimit_dim(dia, Rational(1), Rational(0));
    }
    out.stages.push_back(std::move(st));
  }
  return out;
}

VectOracleResult vect_pushout_oracle(const VectPushoutProblem& prob, int kcap, int scap) {
  VectOracleResult res;
  auto T = prob.R.T;
  auto rdim = [&](const std::string& c) {
    auto it = prob.R.dims.find(c);
    return it == prob.R.dims.end() ? 0 : it->second;
  };
  auto kdim = [&](const std::string& c) {
    auto it = prob.K.find(c);
    return it == prob.K.end() ? 0 : it->second;
  };
  auto ldim = [&](const std::string& c) {
    auto it = prob.L.find(c);
    return it == prob.L.end() ? 0 : it->second;
  };
  struct BTerm {
    OpId op;
    std::vector<int> leaves;
  };
  std::vector<BTerm> terms;
  std::map<std::string, int> index;
  auto term_key = [&](const BTerm& t) {
    std::string s = std::to_string(t.op) + ":";
    for (int l : t.leaves) s += std::to_string(l) + ",";
    return s;
  };
  auto kl_degree = [&](const BTerm& t) {
    auto srcs = T->sources(t.op);
    int deg = 0;
    for (size_t i = 0; i < srcs.size(); ++i)
      if (t.leaves[i] >= rdim(srcs[i])) ++deg;
    return deg;
  };
  for (OpId b : T->enumerate(scap)) {
    auto srcs = T->sources(b);
    std::vector<int> tup(srcs.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int deg) {
      if (deg > kcap) return;
      if (i == srcs.size()) {
        auto key = term_key({b, tup});
        if (!index.count(key)) {
          index[key] = (int)terms.size();
          terms.push_back({b, tup});
        }
        return;
      }
      int nr = rdim(srcs[i]), nk = kdim(srcs[i]), nl = ldim(srcs[i]);
      for (int x = 0; x < nr + nk + nl; ++x) {
        tup[i] = x;
        rec(i + 1, deg + (x >= nr ? 1 : 0));
      }
    };
    rec(0, 0);
  }
  // relations as sparse rows over the term basis
  struct Rel {
    std::vector<std::pair<int, Rational>> coef;
    int max_deg;
  };
  std::vector<Rel> rels;
  auto find_term = [&](const BTerm& t) -> int {
    auto it = index.find(term_key(t));
    return it == index.end() ? -1 : it->second;
  };
  // leaf relations
  for (int ti = 0; ti < (int)terms.size(); ++ti) {
    auto& t = terms[ti];
    auto srcs = T->sources(t.op);
    for (size_t i = 0; i < srcs.size(); ++i) {
      int nr = rdim(srcs[i]), nk = kdim(srcs[i]);
      int v = t.leaves[i];
      if (v < nr || v >= nr + nk) continue;
      int kidx = v - nr;
      // t - sum_j u[k,j] (t with L_j) : degree unchanged
      {
        Rel rel;
        rel.coef.push_back({ti, Rational(1)});
        Mat<Rational> um = prob.u(srcs[i]);
        for (int j = 0; j < ldim(srcs[i]); ++j) {
          if (um.at(kidx, j).is_zero()) continue;
          BTerm t2 = t;
          t2.leaves[i] = nr + nk + j;
          int id2 = find_term(t2);
          if (id2 >= 0) rel.coef.push_back({id2, -um.at(kidx, j)});
        }
        rel.max_deg = kl_degree(t);
        rels.push_back(std::move(rel));
      }
      {
        Rel rel;
        rel.coef.push_back({ti, Rational(1)});
        Mat<Rational> am = prob.alpha(srcs[i]);
        for (int j = 0; j < nr; ++j) {
          if (am.at(kidx, j).is_zero()) continue;
          BTerm t2 = t;
          t2.leaves[i] = j;
          int id2 = find_term(t2);
          if (id2 >= 0) rel.coef.push_back({id2, -am.at(kidx, j)});
        }
        rel.max_deg = kl_degree(t);
        rels.push_back(std::move(rel));
      }
    }
  }
  // one-block collapses
  std::map<std::string, std::vector<OpId>> by_colour;
  for (OpId b : T->enumerate(scap)) by_colour[T->colour_of(b)].push_back(b);
  for (OpId c : T->enumerate(scap)) {
    auto csrcs = T->sources(c);
    for (size_t j = 0; j < csrcs.size(); ++j) {
      for (OpId dop : by_colour[csrcs[j]]) {
        if (T->is_unit(dop)) continue;
        std::vector<OpId> args(csrcs.size());
        for (size_t i = 0; i < csrcs.size(); ++i)
          args[i] = i == j ? dop : T->unit(csrcs[i]);
        SubstResult r;
        try {
          r = T->substitute(c, args);
        } catch (...) {
          continue;
        }
        if (T->size(r.op) > scap) continue;
        auto esrcs = T->sources(r.op);
        auto dsrcs = T->sources(dop);
        Mat<Rational> actm = prob.R.act(dop);
        std::vector<int> tup(esrcs.size(), 0);
        std::function<void(size_t, int)> rec = [&](size_t i, int deg) {
          if (deg > kcap) return;
          if (i == esrcs.size()) {
            BTerm big{r.op, tup};
            int itb = find_term(big);
            if (itb < 0) return;
            std::vector<int> dargs(dsrcs.size(), -1);
            bool allR = true;
            for (size_t t2 = 0; t2 < r.slot_origin.size(); ++t2) {
              auto [ii, jj] = r.slot_origin[t2];
              if (ii == (int)j) {
                if (tup[t2] >= rdim(dsrcs[jj])) allR = false;
                else dargs[jj] = tup[t2];
              }
            }
            if (!allR) return;
            // tensor basis index of the block arguments (row-major)
            int pos = 0;
            for (size_t jj = 0; jj < dsrcs.size(); ++jj)
              pos = pos * rdim(dsrcs[jj]) + dargs[jj];
            Rel rel;
            rel.coef.push_back({itb, Rational(1)});
            int tdim = rdim(T->colour_of(dop));
            for (int y = 0; y < tdim; ++y) {
              Rational v = actm.at(pos, y);
              if (v.is_zero()) continue;
              std::vector<int> small(csrcs.size());
              for (size_t t2 = 0; t2 < r.slot_origin.size(); ++t2) {
                auto [ii, jj] = r.slot_origin[t2];
                if (ii != (int)j) small[ii] = tup[t2];
              }
              small[j] = y;
              int ids = find_term({c, small});
              if (ids >= 0) rel.coef.push_back({ids, -v});
            }
            rel.max_deg = kl_degree(big);
            rels.push_back(std::move(rel));
            return;
          }
          int nr = rdim(esrcs[i]), nk = kdim(esrcs[i]), nl = ldim(esrcs[i]);
          for (int x = 0; x < nr + nk + nl; ++x) {
            tup[i] = x;
            rec(i + 1, deg + (x >= nr ? 1 : 0));
          }
        };
        rec(0, 0);
      }
    }
  }
  std::set<std::string> colours;
  for (auto& t : terms) colours.insert(T->colour_of(t.op));
  for (int k = 0; k <= kcap; ++k) {
    // basis and relations within the <= k universe, split by colour
    for (auto& colour : colours) {
      std::vector<int> sub;  // term ids of this colour, degree <= k
      std::map<int, int> pos;
      for (int i = 0; i < (int)terms.size(); ++i)
        if (T->colour_of(terms[i].op) == colour && kl_degree(terms[i]) <= k) {
          pos[i] = (int)sub.size();
          sub.push_back(i);
        }
      std::vector<const Rel*> rsub;
      for (auto& rel : rels) {
        if (rel.coef.empty()) continue;
        if (T->colour_of(terms[rel.coef[0].first].op) != colour) continue;
        bool in = true;
        for (auto& [id, v] : rel.coef)
          if (!pos.count(id)) in = false;
        if (in) rsub.push_back(&rel);
      }
      Mat<Rational> m((int)rsub.size(), (int)sub.size(), Rational(0));
      for (size_t r2 = 0; r2 < rsub.size(); ++r2)
        for (auto& [id, v] : rsub[r2]->coef)
          m.at((int)r2, pos[id]) = m.at((int)r2, pos[id]) + v;
      res.dims_by_degree[colour].push_back((int)sub.size() - rank_of(m));
    }
  }
  return res;
}

// ---------- chain complexes ----------

bool ChainComplex::valid() const {
  for (size_t i = 0; i < diff.size(); ++i) {
    if (diff[i].rows != dim(lo + (int)i + 1) || diff[i].cols != dim(lo + (int)i))
      return false;
  }
  // d.d = 0
  for (size_t i = 0; i + 1 < diff.size(); ++i) {
    const Mat<Fp>& d1 = diff[i];      // C_{lo+i+1} -> C_{lo+i}
    const Mat<Fp>& d2 = diff[i + 1];  // C_{lo+i+2} -> C_{lo+i+1}
    for (int r = 0; r < d2.rows; ++r)
      for (int c = 0; c < d1.cols; ++c) {
        Fp s(0, p);
        for (int m = 0; m < d1.rows; ++m) s = s + d2.at(r, m) * d1.at(m, c);
        if (!s.is_zero()) return false;
      }
  }
  return true;
}

std::map<int, int> ChainComplex::homology() const {
  std::map<int, int> h;
  for (int d = lo; d < lo + (int)dims.size(); ++d) {
    // H_d = ker(d_d: C_d -> C_{d-1}) / im(d_{d+1})
    int i_out = d - lo - 1;  // diff index for C_d -> C_{d-1}
    int i_in = d - lo;       // diff index for C_{d+1} -> C_d
    int rank_out = 0, rank_in = 0;
    if (i_out >= 0 && i_out < (int)diff.size()) rank_out = rank_of(diff[i_out]);
    if (i_in >= 0 && i_in < (int)diff.size()) rank_in = rank_of(diff[i_in]);
    h[d] = dim(d) - rank_out - rank_in;
  }
  return h;
}

bool ChainComplex::acyclic() const {
  for (auto& [d, v] : homology())
    if (v != 0) return false;
  return true;
}

ChainComplex chain_tensor(const ChainComplex& a, const ChainComplex& b) {
  ChainComplex c;
  c.p = a.p;
  c.lo = a.lo + b.lo;
  int hi = (a.lo + (int)a.dims.size() - 1) + (b.lo + (int)b.dims.size() - 1);
  c.dims.assign(hi - c.lo + 1, 0);
  // basis of degree d: pairs (deg_a, (i, j)) in lexicographic order
  auto basis = [&](int d) {
    std::vector<std::array<int, 3>> out;  // (da, i, j)
    for (int da = a.lo; da < a.lo + (int)a.dims.size(); ++da) {
      int db = d - da;
      if (a.dim(da) == 0 || b.dim(db) == 0) continue;
      for (int i = 0; i < a.dim(da); ++i)
        for (int j = 0; j < b.dim(db); ++j) out.push_back({da, i, j});
    }
    return out;
  };
  for (int d = c.lo; d <= hi; ++d) c.dims[d - c.lo] = (int)basis(d).size();
  for (int d = c.lo + 1; d <= hi; ++d) {
    auto dom = basis(d), cod = basis(d - 1);
    std::map<std::array<int, 3>, int> cidx;
    for (size_t i = 0; i < cod.size(); ++i) cidx[cod[i]] = (int)i;
    Mat<Fp> m((int)dom.size(), (int)cod.size(), Fp(0, c.p));
    for (size_t r = 0; r < dom.size(); ++r) {
      auto [da, i, j] = dom[r];
      int db = d - da;
      // d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy
      int ia = da - a.lo - 1;
      if (ia >= 0 && ia < (int)a.diff.size())
        for (int i2 = 0; i2 < a.dim(da - 1); ++i2) {
          Fp v = a.diff[ia].at(i, i2);
          if (v.is_zero()) continue;
          auto it = cidx.find({da - 1, i2, j});
          if (it != cidx.end()) m.at((int)r, it->second) = m.at((int)r, it->second) + v;
        }
      int ib = db - b.lo - 1;
      if (ib >= 0 && ib < (int)b.diff.size())
        for (int j2 = 0; j2 < b.dim(db - 1); ++j2) {
          Fp v = b.diff[ib].at(j, j2);
          if (v.is_zero()) continue;
          Fp sign = (da % 2 == 0) ? Fp(1, c.p) : Fp(-1, c.p);
          auto it = cidx.find({da, i, j2});
          if (it != cidx.end())
            m.at((int)r, it->second) = m.at((int)r, it->second) + sign * v;
        }
    }
    // diff entry for C_d -> C_{d-1} must land at index d-1-lo
    c.diff.push_back(std::move(m));
  }
  return c;
}

namespace {

// the twist with Koszul signs as a matrix on the degree-d part of C (x) C
Mat<Fp> twist_matrix(const ChainComplex& cc, const ChainComplex& c, int d) {
  // basis of cc at degree d comes from chain_tensor's ordering: (da, i, j)
  std::vector<std::array<int, 3>> bas;
  for (int da = c.lo; da < c.lo + (int)c.dims.size(); ++da) {
    int db = d - da;
    if (c.dim(da) == 0 || c.dim(db) == 0) continue;
    for (int i = 0; i < c.dim(da); ++i)
      for (int j = 0; j < c.dim(db); ++j) bas.push_back({da, i, j});
  }
  std::map<std::array<int, 3>, int> idx;
  for (size_t i = 0; i < bas.size(); ++i) idx[bas[i]] = (int)i;
  Mat<Fp> m((int)bas.size(), (int)bas.size(), Fp(0, cc.p));
  for (size_t r = 0; r < bas.size(); ++r) {
    auto [da, i, j] = bas[r];
    int db = d - da;
    // tau(x (x) y) = (-1)^{|x||y|} y (x) x
    Fp sign = ((long long)da * db % 2 == 0) ? Fp(1, cc.p) : Fp(-1, cc.p);
    m.at((int)r, idx.at({db, j, i})) = sign;
  }
  return m;
}

}  // namespace

ChainComplex sym2_quotient(const ChainComplex& c) {
  ChainComplex cc = chain_tensor(c, c);
  // quotient by im(id - tau): per degree, pick a basis of the quotient and
  // push the differential through
  int hi = cc.lo + (int)cc.dims.size() - 1;
  // quotient projection per degree: row-reduce (id - tau), quotient basis =
  // complement of the pivot columns
  std::vector<Mat<Fp>> proj;      // old basis -> quotient basis
  std::vector<int> qdims;
  std::vector<Mat<Fp>> reducers;  // row-reduced relation matrices
  for (int d = cc.lo; d <= hi; ++d) {
    int n = cc.dim(d);
    Mat<Fp> tw = twist_matrix(cc, c, d);
    Mat<Fp> rel(n, n, Fp(0, cc.p));
    for (int r = 0; r < n; ++r) {
      rel.at(r, r) = rel.at(r, r) + Fp(1, cc.p);
      for (int c2i = 0; c2i < n; ++c2i)
        rel.at(r, c2i) = rel.at(r, c2i) - tw.at(r, c2i);
    }
    row_reduce(rel);
    reducers.push_back(rel);
    // pivot columns
    std::vector<int> pivot(n, -1);
    std::vector<char> is_pivot(n, 0);
    int prow = 0;
    for (int col = 0; col < n && prow < n; ++col) {
      if (!rel.at(prow, col).is_zero()) {
        is_pivot[col] = 1;
        pivot[col] = prow;
        ++prow;
      }
    }
    std::vector<int> freecols;
    for (int col = 0; col < n; ++col)
      if (!is_pivot[col]) freecols.push_back(col);
    qdims.push_back((int)freecols.size());
    // projection: e_col maps to its class expressed in free columns:
    // if free: itself; if pivot: - (row expansion beyond the pivot)
    Mat<Fp> P(n, (int)freecols.size(), Fp(0, cc.p));
    std::map<int, int> freeidx;
    for (size_t i = 0; i < freecols.size(); ++i) freeidx[freecols[i]] = (int)i;
    for (int col = 0; col < n; ++col) {
      if (!is_pivot[col]) {
        P.at(col, freeidx[col]) = Fp(1, cc.p);
      } else {
        int r = pivot[col];
        // e_col = -sum_{c' > col, free} rel(r, c') e_{c'} modulo relations
        for (int c2 = col + 1; c2 < n; ++c2) {
          if (rel.at(r, c2).is_zero()) continue;
          if (freeidx.count(c2))
            P.at(col, freeidx[c2]) = P.at(col, freeidx[c2]) - rel.at(r, c2);
          else {
            // pivot again: expand recursively; with (id - tau) relations the
            // chain has length <= 2, expand one more level
            int r2 = pivot[c2];
            for (int c3 = c2 + 1; c3 < n; ++c3) {
              if (rel.at(r2, c3).is_zero() || !freeidx.count(c3)) continue;
              P.at(col, freeidx[c3]) =
                  P.at(col, freeidx[c3]) + rel.at(r, c2) * rel.at(r2, c3);
            }
          }
        }
      }
    }
    proj.push_back(P);
  }
  ChainComplex q;
  q.p = cc.p;
  q.lo = cc.lo;
  q.dims = qdims;
  for (int d = cc.lo + 1; d <= hi; ++d) {
    // quotient differential: choose for each free column its representative
    // (the basis vector itself), apply d, project
    int di = d - cc.lo - 1;
    const Mat<Fp>& D = cc.diff[di];  // C_d -> C_{d-1}
    const Mat<Fp>& Pd = proj[d - cc.lo];
    const Mat<Fp>& Pc = proj[d - 1 - cc.lo];
    // rows of the quotient differential = free columns at degree d
    int n = cc.dim(d);
    std::vector<int> freecols;
    {
      const Mat<Fp>& rel = reducers[d - cc.lo];
      std::vector<char> is_pivot(n, 0);
      int prow = 0;
      for (int col = 0; col < n && prow < n; ++col)
        if (!rel.at(prow, col).is_zero()) {
          is_pivot[col] = 1;
          ++prow;
        }
      for (int col = 0; col < n; ++col)
        if (!is_pivot[col]) freecols.push_back(col);
    }
    Mat<Fp> qd((int)freecols.size(), Pc.cols, Fp(0, q.p));
    for (size_t r = 0; r < freecols.size(); ++r) {
      int col = freecols[r];
      for (int c2 = 0; c2 < D.cols; ++c2) {
        Fp v = D.at(col, c2);
        if (v.is_zero()) continue;
        for (int f = 0; f < Pc.cols; ++f)
          qd.at((int)r, f) = qd.at((int)r, f) + v * Pc.at(c2, f);
      }
    }
    q.diff.push_back(std::move(qd));
    (void)Pd;
  }
  return q;
}

std::map<int, int> sym2_quotient_homology_Q(const ChainComplex& c_shape) {
  // replay the construction over Q: the complex entries are lifted from the
  // F_p representative by mapping residues to integers 0..p-1
  // tensor square with signs, quotient by (id - tau), homology over Q
  auto lift = [&](const Mat<Fp>& m) {
    Mat<Rational> out(m.rows, m.cols, Rational(0));
    for (int r = 0; r < m.rows; ++r)
      for (int c = 0; c < m.cols; ++c) out.at(r, c) = Rational(m.at(r, c).v);
    return out;
  };
  const ChainComplex& c = c_shape;
  int hi = c.lo + (int)c.dims.size() - 1;
  int qlo = 2 * c.lo, qhi = 2 * hi;
  auto basis = [&](int d) {
    std::vector<std::array<int, 3>> out;
    for (int da = c.lo; da <= hi; ++da) {
      int db = d - da;
      if (c.dim(da) == 0 || c.dim(db) == 0) continue;
      for (int i = 0; i < c.dim(da); ++i)
        for (int j = 0; j < c.dim(db); ++j) out.push_back({da, i, j});
    }
    return out;
  };
  std::vector<Mat<Rational>> lifted;
  for (auto& m : c.diff) lifted.push_back(lift(m));
  auto dmat = [&](int d) {  // C_d -> C_{d-1} of the tensor square over Q
    auto dom = basis(d), cod = basis(d - 1);
    std::map<std::array<int, 3>, int> cidx;
    for (size_t i = 0; i < cod.size(); ++i) cidx[cod[i]] = (int)i;
    Mat<Rational> m((int)dom.size(), (int)cod.size(), Rational(0));
    for (size_t r = 0; r < dom.size(); ++r) {
      auto [da, i, j] = dom[r];
      int db = d - da;
      int ia = da - c.lo - 1;
      if (ia >= 0 && ia < (int)lifted.size())
        for (int i2 = 0; i2 < c.dim(da - 1); ++i2) {
          Rational v = lifted[ia].at(i, i2);
          if (v.is_zero()) continue;
          auto it = cidx.find({da - 1, i2, j});
          if (it != cidx.end()) m.at((int)r, it->second) = m.at((int)r, it->second) + v;
        }
      int ib = db - c.lo - 1;
      if (ib >= 0 && ib < (int)lifted.size())
        for (int j2 = 0; j2 < c.dim(db - 1); ++j2) {
          Rational v = lifted[ib].at(j, j2);
          if (v.is_zero()) continue;
          Rational sign = (da % 2 == 0) ? Rational(1) : Rational(-1);
          auto it = cidx.find({da, i, j2});
          if (it != cidx.end())
            m.at((int)r, it->second) = m.at((int)r, it->second) + sign * v;
        }
    }
    return m;
  };
  // quotient dims and projected differentials via relation matrices
  std::map<int, Mat<Rational>> projs;
  std::map<int, std::vector<int>> frees;
  std::map<int, int> qdim;
  for (int d = qlo; d <= qhi; ++d) {
    auto bas = basis(d);
    int n = (int)bas.size();
    std::map<std::array<int, 3>, int> idx;
    for (size_t i = 0; i < bas.size(); ++i) idx[bas[i]] = (int)i;
    Mat<Rational> rel(n, n, Rational(0));
    for (int r = 0; r < n; ++r) {
      auto [da, i, j] = bas[r];
      int db = d - da;
      rel.at(r, r) = rel.at(r, r) + Rational(1);
      Rational sign = ((long long)da * db % 2 == 0) ? Rational(1) : Rational(-1);
      int tcol = idx.at({db, j, i});
      rel.at(r, tcol) = rel.at(r, tcol) - sign;
    }
    row_reduce(rel);
    std::vector<char> is_pivot(n, 0);
    std::vector<int> pivot(n, -1);
    int prow = 0;
    for (int col = 0; col < n && prow < n; ++col)
      if (!rel.at(prow, col).is_zero()) {
        is_pivot[col] = 1;
        pivot[col] = prow;
        ++prow;
      }
    std::vector<int> fc;
    for (int col = 0; col < n; ++col)
      if (!is_pivot[col]) fc.push_back(col);
    qdim[d] = (int)fc.size();
    std::map<int, int> fidx;
    for (size_t i = 0; i < fc.size(); ++i) fidx[fc[i]] = (int)i;
    Mat<Rational> P(n, (int)fc.size(), Rational(0));
    for (int col = 0; col < n; ++col) {
      if (!is_pivot[col]) P.at(col, fidx[col]) = Rational(1);
      else {
        int r = pivot[col];
        for (int c2 = col + 1; c2 < n; ++c2) {
          if (rel.at(r, c2).is_zero()) continue;
          if (fidx.count(c2)) P.at(col, fidx[c2]) = P.at(col, fidx[c2]) - rel.at(r, c2);
          else {
            int r2 = pivot[c2];
            for (int c3 = c2 + 1; c3 < n; ++c3) {
              if (rel.at(r2, c3).is_zero() || !fidx.count(c3)) continue;
              P.at(col, fidx[c3]) = P.at(col, fidx[c3]) + rel.at(r, c2) * rel.at(r2, c3);
            }
          }
        }
      }
    }
    projs[d] = P;
    frees[d] = fc;
  }
  std::map<int, Mat<Rational>> qdiff;
  for (int d = qlo + 1; d <= qhi; ++d) {
    auto D = dmat(d);
    auto& Pc = projs[d - 1];
    auto& fc = frees[d];
    Mat<Rational> qd((int)fc.size(), Pc.cols, Rational(0));
    for (size_t r = 0; r < fc.size(); ++r)
      for (int c2 = 0; c2 < D.cols; ++c2) {
        Rational v = D.at(fc[r], c2);
        if (v.is_zero()) continue;
        for (int f = 0; f < Pc.cols; ++f)
          qd.at((int)r, f) = qd.at((int)r, f) + v * Pc.at(c2, f);
      }
    qdiff[d] = qd;
  }
  std::map<int, int> h;
  for (int d = qlo; d <= qhi; ++d) {
    int rank_out = qdiff.count(d) ? rank_of(qdiff[d]) : 0;
    int rank_in = qdiff.count(d + 1) ? rank_of(qdiff[d + 1]) : 0;
    h[d] = qdim[d] - rank_out - rank_in;
  }
  return h;
}

std::optional<ChainComplex> find_char2_witness() {
  // two-term acyclic complexes F_2^a -> F_2^a with a full-rank differential,
  // placed at varying degree offsets; search the smallest with H_0 of the
  // symmetric square of dimension 2
  for (int a = 1; a <= 3; ++a) {
    for (int lo = -1; lo <= 1; ++lo) {
      // invertible a x a matrices over F_2
      int n = a * a;
      for (int mask = 0; mask < (1 << n); ++mask) {
        Mat<Fp> m(a, a, Fp(0, 2));
        for (int r = 0; r < a; ++r)
          for (int c = 0; c < a; ++c)
            if (mask >> (r * a + c) & 1) m.at(r, c) = Fp(1, 2);
        if (rank_of(m) != a) continue;
        ChainComplex c;
        c.p = 2;
        c.lo = lo;
        c.dims = {a, a};  // degrees lo, lo+1
        c.diff = {m};     // C_{lo+1} -> C_{lo}
        if (!c.valid() || !c.acyclic()) continue;
        auto q = sym2_quotient(c);
        auto h = q.homology();
        if (h.count(0) && h[0] == 2) {
          // the same construction over Q must be acyclic
          auto hq = sym2_quotient_homology_Q(c);
          bool acyc = true;
          for (auto& [d, v] : hq)
            if (v != 0) acyc = false;
          if (acyc) return c;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace polymnd
