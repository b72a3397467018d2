#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "polymnd/monad.hpp"

using namespace polymnd;

TEST_CASE("monoid monad: words and laws") {
  auto M = builtin("monoids");
  std::map<int, int> by_arity;
  for (OpId b : M->enumerate(7)) by_arity[M->arity(b)]++;
  for (auto& [k, c] : by_arity) CHECK(c == 1);  // one linear tree per arity
  CHECK(by_arity.count(0));
  CHECK(by_arity.count(6));

  auto rep = check_monad_laws(M, 6);
  CHECK(rep.ok);
  CHECK(rep.checked > 100);

  Collection X;
  X.at["*"] = {"a", "b"};
  auto ev = eval(M, X, 4);  // trees with <= 3 vertices
  REQUIRE(ev.count("*"));
  CHECK((int)ev["*"].size() == 1 + 2 + 4 + 8);
}

TEST_CASE("identity and diagrams monads pass the laws") {
  CHECK(check_monad_laws(builtin("identity"), 3).ok);
  CHECK(check_monad_laws(builtin("diagrams"), 3).ok);
}

TEST_CASE("linear monad evaluation is the family of morphisms") {
  auto C = builtin("diagrams");
  Collection X;
  X.at["x"] = {"p"};
  X.at["y"] = {"q", "r"};
  auto ev = eval(C, X, 3);
  CHECK((int)ev["y"].size() == 3);  // id_y q, id_y r, f p
  CHECK((int)ev["x"].size() == 1);
}

TEST_CASE("non-symmetric operads: planar tree counts and laws") {
  auto O = builtin("nsoperads");
  // the two planar composites of two binary operations
  int count = 0;
  for (OpId b : O->enumerate(7)) {
    auto ss = O->sources(b);
    if (ss.size() == 2 && ss[0] == "2" && ss[1] == "2") ++count;
  }
  CHECK(count == 2);
  CHECK(check_monad_laws(O, 6).ok);
}

TEST_CASE("symmetric operads: leaf labellings") {
  auto S = builtin("symop");
  std::map<std::string, int> corollas;
  for (OpId b : S->enumerate(5))
    if ((int)S->sources(b).size() == 1) corollas[S->colour_of(b)]++;
  CHECK(corollas["2"] == 2);
  CHECK(corollas["3"] == 6);
  CHECK(check_monad_laws(builtin("symop-normal"), 6).ok);
}

TEST_CASE("negative control: incomplete substitution table fails the laws") {
  std::string json = R"({
    "name": "corrupt",
    "ops": [
      {"id": "u", "target": "*", "fiber": ["*"]},
      {"id": "m", "target": "*", "fiber": ["*", "*"]},
      {"id": "w", "target": "*", "fiber": ["*", "*", "*"]}
    ],
    "unit": {"*": "u"},
    "subst": [
      {"outer": "m", "inner": ["m", "u"], "result": "w",
       "fiber_map": [[0,0],[0,1],[1,0]]},
      {"outer": "m", "inner": ["u", "m"], "result": "w",
       "fiber_map": [[0,0],[1,0],[1,1]]}
    ]
  })";
  auto T = finite_monad_from_json(json);
  auto rep = check_monad_laws(T, 6);
  CHECK(!rep.ok);
}

TEST_CASE("n-operad monads: laws at small bound") {
  CHECK(check_monad_laws(builtin("NO(2)"), 5).ok);
  CHECK(check_monad_laws(builtin("CFO(2)"), 4).ok);
  CHECK(check_monad_laws(builtin("RO(2)"), 4).ok);
}

TEST_CASE("NO(2) contains two-level composites") {
  auto N = builtin("NO(2)");
  bool found = false;
  for (OpId b : N->enumerate(5))
    if ((int)N->sources(b).size() == 2 && N->size(b) == 5) found = true;
  CHECK(found);
}

TEST_CASE("operad view: composition and units") {
  auto M = builtin("monoids");
  OpId L2 = -1;
  for (OpId b : M->enumerate(3))
    if (M->arity(b) == 2) L2 = b;
  REQUIRE(L2 >= 0);
  TOperation t{L2, {1, 0}};
  std::vector<TOperation> units(2);
  for (int i = 0; i < 2; ++i) units[i] = {M->unit("*"), {0}};
  auto r = OperadView::compose(M, t, units);
  CHECK(r.op == L2);
  CHECK(r.sigma == t.sigma);

  TOperation a{L2, {0, 1}};
  auto ab = OperadView::compose(M, a, {a, a});
  CHECK(M->arity(ab.op) == 4);
}

TEST_CASE("derived monads: evaluation shapes") {
  auto M = builtin("monoids");
  auto M1 = derive(M, Derived::TPlus1);
  Collection XK;
  XK.at[tag_colour("*", 'X')] = {"x1", "x2"};
  XK.at[tag_colour("*", 'K')] = {"k"};
  auto ev = eval(M1, XK, 4);
  CHECK((int)ev[tag_colour("*", 'X')].size() == 15);  // (T X, K)
  CHECK((int)ev[tag_colour("*", 'K')].size() == 1);
  CHECK(check_monad_laws(M1, 5).ok);

  auto Mfg = derive(M, Derived::Tfg);
  Collection XKL = XK;
  XKL.at[tag_colour("*", 'L')] = {"l1", "l2"};
  auto ev2 = eval(Mfg, XKL, 4);
  CHECK((int)ev2[tag_colour("*", 'X')].size() == 40);  // T(X u K) words <= 3
  CHECK((int)ev2[tag_colour("*", 'K')].size() == 1);   // K
  CHECK((int)ev2[tag_colour("*", 'L')].size() == 3);   // K u L
  CHECK(check_monad_laws(Mfg, 4).ok);
}

TEST_CASE("the rewriting relation of the extension monad") {
  // substituting (1, g, 1) into the all-X corolla gives the mixed corolla
  auto M = builtin("monoids");
  auto Mfg = derive(M, Derived::Tfg);
  OpId L3x = -1;
  for (OpId b : Mfg->enumerate(4)) {
    if (derived_access::kind_of(Mfg, b) != 'm') continue;
    auto col = derived_access::colouring_of(Mfg, b);
    if (col == std::vector<char>{'X', 'X', 'X'}) L3x = b;
  }
  REQUIRE(L3x >= 0);
  OpId xunit = Mfg->unit(tag_colour("*", 'X'));
  OpId g = derived_access::g_op(Mfg, "*");
  auto r = Mfg->substitute(L3x, {xunit, g, xunit});
  auto col = derived_access::colouring_of(Mfg, r.op);
  CHECK(col == std::vector<char>{'X', 'K', 'X'});
}

TEST_CASE("plus(identity) matches monoids") {
  auto P = plus(builtin("identity"));
  auto M = builtin("monoids");
  for (int s = 1; s <= 7; ++s)
    CHECK(P->enumerate(s).size() == M->enumerate(s).size());
  CHECK(check_monad_laws(P, 5).ok);
  auto pops = P->enumerate(5);
  std::map<int, OpId> p_by_size, m_by_size;
  for (OpId b : pops) p_by_size[P->size(b)] = b;
  for (OpId b : M->enumerate(5)) m_by_size[M->size(b)] = b;
  for (auto& [s, pb] : p_by_size) {
    OpId mb = m_by_size[s];
    CHECK(P->arity(pb) == M->arity(mb));
    if (P->arity(pb) > 0 && s <= 3) {
      std::vector<OpId> pargs(P->arity(pb), p_by_size[2]);
      std::vector<OpId> margs(M->arity(mb), m_by_size[2]);
      auto pr = P->substitute(pb, pargs);
      auto mr = M->substitute(mb, margs);
      CHECK(P->size(pr.op) == M->size(mr.op));
      CHECK(pr.slot_origin == mr.slot_origin);
    }
  }
}

TEST_CASE("plus: t+ of a single-vertex tree is its decoration") {
  auto P = plus(builtin("monoids"));
  for (OpId b : P->enumerate(4))
    if (P->is_unit(b)) {
      auto srcs = P->sources(b);
      REQUIRE(srcs.size() == 1);
      CHECK(P->colour_of(b) == srcs[0]);
    }
}

TEST_CASE("plus(monoids) matches nsoperads on counts") {
  auto P = plus(builtin("monoids"));
  auto O = builtin("nsoperads");
  for (int s = 1; s <= 6; ++s)
    CHECK(P->enumerate(s).size() == O->enumerate(s).size());
  CHECK(check_monad_laws(P, 5).ok);
}

TEST_CASE("cartesian morphism validation") {
  auto M = builtin("monoids");
  CartesianMonadMap idm;
  idm.src = M;
  idm.dst = M;
  idm.delta = [](const std::string& c) { return c; };
  idm.phi = [](OpId b) { return b; };
  CHECK(validate_cartesian(idm, 5).ok);

  auto M1 = derive(M, Derived::TPlus1);
  CartesianMonadMap proj;
  proj.src = M1;
  proj.dst = M;
  proj.delta = [](const std::string& c) { return c.substr(2); };
  proj.phi = [&](OpId b) {
    if (derived_access::kind_of(M1, b) == 'm') return derived_access::base_op_of(M1, b);
    return M->unit("*");
  };
  CHECK(validate_cartesian(proj, 5).ok);

  auto I = builtin("identity");
  CartesianMonadMap bad;
  bad.src = M;
  bad.dst = I;
  bad.delta = [](const std::string&) { return std::string("*"); };
  bad.phi = [&](OpId) { return I->unit("*"); };
  CHECK(!validate_cartesian(bad, 4).ok);
}

TEST_CASE("eval preserves pullbacks on finite collections") {
  auto M = builtin("monoids");
  std::vector<int> fx = {0, 1, 0};
  std::vector<int> fy = {1, 0};
  Collection X, Y, PB;
  X.at["*"] = {"x0", "x1", "x2"};
  Y.at["*"] = {"y0", "y1"};
  std::vector<std::pair<int, int>> pb;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      if (fx[i] == fy[j]) pb.push_back({i, j});
  PB.at["*"] = std::vector<std::string>(pb.size(), "p");
  int bound = 4;
  auto evX = eval(M, X, bound);
  auto evY = eval(M, Y, bound);
  auto evPB = eval(M, PB, bound);
  int count = 0;
  for (auto& u : evX["*"])
    for (auto& v : evY["*"]) {
      if (u.op != v.op) continue;
      bool ok = true;
      for (size_t s = 0; s < u.assignment.size(); ++s)
        if (fx[u.assignment[s]] != fy[v.assignment[s]]) ok = false;
      if (ok) ++count;
    }
  CHECK(count == (int)evPB["*"].size());
}

TEST_CASE("graph monads: units and small laws") {
  CHECK(check_monad_laws(builtin("cyclic-normal"), 5).ok);
  CHECK(check_monad_laws(builtin("dioperads-normal"), 5).ok);
  CHECK(check_monad_laws(builtin("properads-normal"), 4).ok);
}
