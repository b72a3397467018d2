#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "polymnd/algebra.hpp"

using namespace polymnd;

namespace {

// the cyclic monoid <a | a^(m+r) = a^m> on elements e, a, ..., a^(m+r-1)
FinSetAlgebra cyclic_monoid(int m, int r) {
  FinSetAlgebra A;
  A.T = builtin("monoids");
  int n = m + r;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("a^" + std::to_string(i));
  A.carrier["*"] = names;
  A.act = [m, r, T = A.T](OpId b, const std::vector<int>& args) -> int {
    long long s = 0;
    for (int a : args) s += a;
    (void)T;
    while (s >= m + r) s -= r;
    return (int)s;
  };
  return A;
}

int constant_map(const std::string&, int) { return 0; }

}  // namespace

TEST_CASE("free algebra: truncated words with substitution action") {
  auto M = builtin("monoids");
  Collection K;
  K.at["*"] = {"a", "b"};
  auto fa = FreeAlgebra::make(M, K, 4);
  CHECK((int)fa.carrier["*"].size() == 15);  // words of length <= 3
  auto A = fa.as_algebra();
  // multiply two singletons
  OpId L2 = -1;
  for (OpId b : M->enumerate(3))
    if (M->arity(b) == 2) L2 = b;
  // elements 1 and 2 are the singleton words a, b
  int ab = A.act(L2, {1, 2});
  CHECK(ab >= 0);
  CHECK(check_algebra_laws(A, 3).ok);
}

TEST_CASE("free algebra on empty collection over a unitless-arity monad") {
  auto M = builtin("monoids");
  Collection empty;
  auto fa = FreeAlgebra::make(M, empty, 4);
  // only the empty word survives (the nullary operation)
  CHECK((int)fa.carrier["*"].size() == 1);
}

TEST_CASE("planar tree counts drive free nsoperad carriers") {
  auto O = builtin("nsoperads");
  Collection K;
  K.at["2"] = {"g"};  // one binary generator
  auto fa = FreeAlgebra::make(O, K, 7);
  // elements at colour 2: the generator itself
  CHECK((int)fa.carrier["2"].size() == 1);
  // colour 3: two planar composites of g with itself
  CHECK((int)fa.carrier["3"].size() == 2);
  // colour 4: five binary trees with 3 leaves... with 4 leaves: catalan(3)=5
  CHECK((int)fa.carrier["4"].size() == 5);
}

TEST_CASE("cyclic monoid satisfies the algebra laws") {
  auto A = cyclic_monoid(2, 3);
  CHECK(check_algebra_laws(A, 4).ok);
}

TEST_CASE("finite-set colimits: coequalizer and zigzags") {
  // coequalizer of two maps on a 4-element set identifying pairwise
  FinSetDiagram d;
  d.sizes = {4, 4};  // object 0 = source, 1 = target
  d.arrows.push_back({0, 1, {0, 1, 2, 3}});
  d.arrows.push_back({0, 1, {1, 0, 3, 2}});
  auto [n, classes] = finset_colimit(d);
  CHECK(n == 2);
  // one-object diagram
  FinSetDiagram one;
  one.sizes = {5};
  CHECK(finset_colimit(one).first == 5);
}

TEST_CASE("vector-space pushout dimension") {
  // pushout along injections: dim = dim A + dim B - dim C
  VectDiagram<Rational> d;
  d.dims = {1, 2, 3};  // C, A, B
  VectDiagram<Rational>::Arrow f;
  f.src = 0;
  f.dst = 1;
  f.map = Mat<Rational>(1, 2, Rational(0));
  f.map.at(0, 0) = Rational(1);
  VectDiagram<Rational>::Arrow g;
  g.src = 0;
  g.dst = 2;
  g.map = Mat<Rational>(1, 3, Rational(0));
  g.map.at(0, 1) = Rational(1);
  d.arrows = {f, g};
  CHECK(vect_colimit_dim(d, Rational(1), Rational(0)) == 2 + 3 - 1);
}

TEST_CASE("functor evaluation on classifier objects") {
  auto M = builtin("monoids");
  Classifier cls(M, ClsKind::Semifree, 5);
  ExtData d;
  d.R = cyclic_monoid(1, 2);  // 3 elements
  d.Kc["*"] = {"k1", "k2"};
  d.u = constant_map;
  d.alpha = constant_map;
  // the alternating XKX tree: value R x K x R
  OpId L3 = -1;
  for (OpId b : M->enumerate(4))
    if (M->arity(b) == 3) L3 = b;
  ClsObject xkx{L3, {'X', 'K', 'X'}};
  CHECK((int)functor_elements(cls, xkx, d).size() == 3 * 2 * 3);
  // object with no edges: the monoidal unit (a single empty tuple)
  OpId L0 = -1;
  for (OpId b : M->enumerate(2))
    if (M->arity(b) == 0) L0 = b;
  ClsObject l0{L0, {}};
  CHECK((int)functor_elements(cls, l0, d).size() == 1);
}

TEST_CASE("functoriality: value along a composite equals composite of values") {
  auto M = builtin("monoids");
  Classifier cls(M, ClsKind::Semifree, 6);
  ExtData d;
  d.R = cyclic_monoid(1, 2);
  d.Kc["*"] = {"k"};
  d.u = constant_map;
  d.alpha = constant_map;
  OpId L3 = -1, L4 = -1, L5 = -1;
  for (OpId b : M->enumerate(6)) {
    if (M->arity(b) == 3) L3 = b;
    if (M->arity(b) == 4) L4 = b;
    if (M->arity(b) == 5) L5 = b;
  }
  ClsObject xxxkx{L5, {'X', 'X', 'X', 'K', 'X'}};
  ClsObject xxkx{L4, {'X', 'X', 'K', 'X'}};
  ClsObject xkx{L3, {'X', 'K', 'X'}};
  auto f = cls.hom(xxxkx, xxkx);
  auto g = cls.hom(xxkx, xkx);
  REQUIRE(!f.empty());
  REQUIRE(!g.empty());
  auto gf = cls.compose(g[0], f[0]);
  for (auto& e : functor_elements(cls, xxxkx, d)) {
    auto two_step = functor_apply(cls, g[0], functor_apply(cls, f[0], e, d), d);
    auto one_step = functor_apply(cls, gf, e, d);
    CHECK(two_step == one_step);
  }
}

TEST_CASE("semifree coproduct of a monoid with a free part") {
  // X the one-element monoid, K = {k}: counts per K-degree follow x (k x)^n
  FinSetAlgebra X;
  X.T = builtin("monoids");
  X.carrier["*"] = {"e"};
  X.act = [](OpId, const std::vector<int>&) { return 0; };
  std::map<std::string, std::vector<std::string>> K;
  K["*"] = {"k"};
  auto res = semifree_coproduct(X, K, 6);
  CHECK(res.tame);
  CHECK(res.two_path_ok);
  CHECK(res.complete_upto >= 2);
  CHECK(res.counts_by_degree[0] == 1);
  CHECK(res.counts_by_degree[1] == 1);
  CHECK(res.counts_by_degree[2] == 1);
  // K empty: X alone
  std::map<std::string, std::vector<std::string>> none;
  auto res2 = semifree_coproduct(X, none, 4);
  CHECK(res2.counts_by_degree[0] == 1);
  for (auto& [deg, v] : res2.counts_by_degree)
    if (deg > 0) CHECK(v == 0);
}

TEST_CASE("semifree counts scale with carrier sizes") {
  auto X = cyclic_monoid(1, 1);  // {e, a}, a^2 = a
  std::map<std::string, std::vector<std::string>> K;
  K["*"] = {"k1", "k2", "k3"};
  auto res = semifree_coproduct(X, K, 6);
  CHECK(res.two_path_ok);
  int x = 2, k = 3;
  CHECK(res.counts_by_degree[0] == x);
  CHECK(res.counts_by_degree[1] == (long long)x * k * x);
  CHECK(res.counts_by_degree[2] == (long long)x * k * x * k * x);
}

TEST_CASE("pushout filtration of monoids against the oracle") {
  auto R = cyclic_monoid(1, 2);
  PushoutProblem prob;
  prob.R = R;
  prob.K["*"] = {"k1"};
  prob.L["*"] = {"l1", "l2"};
  prob.u = [](const std::string&, int) { return 0; };
  prob.alpha = [](const std::string&, int) { return 1; };  // k -> a
  int kmax = 2;
  auto filt = pushout_filtration(prob, kmax, 6);
  REQUIRE((int)filt.stages.size() == kmax + 1);
  CHECK(filt.squares_ok);
  auto orc = pushout_oracle(prob, kmax, 6);
  for (int k = 0; k <= kmax; ++k) {
    CHECK(filt.stages[k].P["*"] == orc.counts_by_degree["*"][k]);
  }
  // u identity with L = K stabilizes at R
  PushoutProblem triv;
  triv.R = R;
  triv.K["*"] = {"k1"};
  triv.L["*"] = {"l1"};
  triv.u = [](const std::string&, int x) { return x; };
  triv.alpha = [](const std::string&, int) { return 2; };
  auto tf = pushout_filtration(triv, 2, 6);
  CHECK(tf.squares_ok);
  for (auto& st : tf.stages) CHECK(st.P["*"] == 3);  // |R|
  auto torc = pushout_oracle(triv, 2, 6);
  for (int k = 0; k <= 2; ++k) CHECK(torc.counts_by_degree["*"][k] == 3);
}

TEST_CASE("random pushout problems: filtration equals oracle (monoids)") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    int m = 1 + (int)(rng() % 2), r = 1 + (int)(rng() % 2);
    auto R = cyclic_monoid(m, r);
    PushoutProblem prob;
    prob.R = R;
    int nk = 1, nl = 1 + (int)(rng() % 2);
    for (int i = 0; i < nk; ++i) prob.K["*"].push_back("k" + std::to_string(i));
    for (int i = 0; i < nl; ++i) prob.L["*"].push_back("l" + std::to_string(i));
    int utgt = (int)(rng() % nl);
    int atgt = (int)(rng() % (m + r));
    prob.u = [utgt](const std::string&, int) { return utgt; };
    prob.alpha = [atgt](const std::string&, int) { return atgt; };
    auto filt = pushout_filtration(prob, 2, 6);
    auto orc = pushout_oracle(prob, 2, 6);
    REQUIRE(filt.squares_ok);
    for (int k = 0; k <= 2; ++k)
      CHECK(filt.stages[k].P["*"] == orc.counts_by_degree["*"][k]);
  }
}

TEST_CASE("vector space filtration equals linear oracle") {
  // R = Q[a]/(a^2 = a) as a 2-dimensional monoid algebra
  VectAlgebra R;
  R.T = builtin("monoids");
  R.dims["*"] = 2;
  R.act = [T = R.T](OpId b) {
    int k = T->arity(b);
    int n = 1 << k;
    Mat<Rational> m(n, 2, Rational(0));
    for (int mask = 0; mask < n; ++mask) {
      // basis e (idx 0), a (idx 1): product of choices; a*a = a
      bool has_a = false;
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1) has_a = true;
      // tuple index: row-major with e=0, a=1 per factor
      int row = 0;
      for (int i = 0; i < k; ++i) row = row * 2 + ((mask >> i) & 1);
      m.at(row, has_a ? 1 : 0) = Rational(1);
    }
    return m;
  };
  VectPushoutProblem prob;
  prob.R = R;
  prob.K["*"] = 1;
  prob.L["*"] = 1;
  prob.u = [](const std::string&) {
    Mat<Rational> m(1, 1, Rational(0));
    m.at(0, 0) = Rational(1);
    return m;
  };
  prob.alpha = [](const std::string&) {
    Mat<Rational> m(1, 2, Rational(0));
    m.at(0, 1) = Rational(1);  // k -> a
    return m;
  };
  auto filt = vect_pushout_filtration(prob, 2, 6);
  auto orc = vect_pushout_oracle(prob, 2, 6);
  REQUIRE((int)filt.stages.size() == 3);
  for (int k = 0; k <= 2; ++k)
    CHECK(filt.stages[k].P["*"] == orc.dims_by_degree["*"][k]);
}

TEST_CASE("chain complexes: tensor, symmetric quotient, homology") {
  // zero complex
  ChainComplex zero;
  zero.p = 2;
  zero.lo = 0;
  zero.dims = {0};
  CHECK(zero.acyclic());
  auto qz = sym2_quotient(zero);
  for (auto& [d, v] : qz.homology()) CHECK(v == 0);

  // acyclic 2-term: identity differential in degrees (0, -1)
  ChainComplex c;
  c.p = 2;
  c.lo = -1;
  c.dims = {1, 1};
  c.diff = {Mat<Fp>(1, 1, Fp(1, 2))};
  REQUIRE(c.valid());
  CHECK(c.acyclic());
  auto q = sym2_quotient(c);
  auto h = q.homology();
  // single-generator case: dim H_0 = 1 over F_2
  CHECK(h[0] == 1);
}

TEST_CASE("characteristic-2 obstruction witness") {
  auto w = find_char2_witness();
  REQUIRE(w.has_value());
  CHECK(w->acyclic());
  auto q = sym2_quotient(*w);
  auto h = q.homology();
  CHECK(h[0] == 2);
  auto hq = sym2_quotient_homology_Q(*w);
  for (auto& [d, v] : hq) CHECK(v == 0);
}
