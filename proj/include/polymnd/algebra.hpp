#pragma once
// Algebras in concrete coefficient worlds: finite sets and exact vector
// spaces over Q/F_p, plus bounded chain complexes over F_p for the
// characteristic-2 obstruction. Free algebras, semi-free coproducts, the
// pushout filtration with its (K,L,X) squares, the independent term-model
// pushout oracle, and finite-diagram colimits.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polymnd/classifier.hpp"
#include "polymnd/field.hpp"
#include "polymnd/monad.hpp"

namespace polymnd {

enum class Scalar { Q, F2, F3 };

// ---------- finite-set world ----------

struct FinSetAlgebra {
  MonadPtr T;
  std::map<std::string, std::vector<std::string>> carrier;
  // action of any bounded operation on element indices (colour-correct)
  std::function<int(OpId, const std::vector<int>&)> act;

  int size_at(const std::string& c) const {
    auto it = carrier.find(c);
    return it == carrier.end() ? 0 : (int)it->second.size();
  }
};

// free T-algebra on a finite collection, truncated at the bound: the carrier
// is eval(T, K, bound) and the action substitutes provenance
struct FreeAlgebra {
  MonadPtr T;
  Collection K;
  int bound;
  std::map<std::string, std::vector<EvalElement>> carrier;

  static FreeAlgebra make(const MonadPtr& T, const Collection& K, int bound);
  int find(const std::string& colour, const EvalElement& e) const;
  FinSetAlgebra as_algebra() const;  // action throws above the bound
};

// algebra-law check on all bounded composites
struct AlgebraLawReport {
  bool ok = true;
  std::string witness;
};
AlgebraLawReport check_algebra_laws(const FinSetAlgebra& A, int bound);

// ---------- finite diagrams and colimits ----------

// a finite diagram in FinSet: objects are element counts, arrows are maps
struct FinSetDiagram {
  std::vector<int> sizes;
  struct Arrow {
    int src, dst;
    std::vector<int> map;
  };
  std::vector<Arrow> arrows;
};
// zigzag classes: returns (number of classes, class of each (object, element))
std::pair<int, std::vector<std::vector<int>>> finset_colimit(const FinSetDiagram& d);

template <class K>
struct VectDiagram {
  std::vector<int> dims;
  struct Arrow {
    int src, dst;
    Mat<K> map;
  };
  std::vector<Arrow> arrows;
};
// dimension of the colimit = dim(coproduct) - rank(difference relations)
template <class K>
int vect_colimit_dim(const VectDiagram<K>& d, const K& one, const K& zero);

// ---------- classifier functor evaluation ----------

// per-colour carriers for the X (and K, L) parts
struct ExtData {
  FinSetAlgebra R;                                     // the T-algebra X
  std::map<std::string, std::vector<std::string>> Kc;  // K collection
  std::map<std::string, std::vector<std::string>> Lc;  // L collection
  std::function<int(const std::string&, int)> u;       // K -> L per colour
  std::function<int(const std::string&, int)> alpha;   // K -> carrier(R)
};

// tuples of element indices in slot order
std::vector<std::vector<int>> functor_elements(const Classifier& cls,
                                               const ClsObject& a, const ExtData& d);
// action of a morphism on an element of its source's value
std::vector<int> functor_apply(const Classifier& cls, const ClsMorphism& m,
                               const std::vector<int>& elem, const ExtData& d);

// ---------- semi-free coproducts ----------

struct SemifreeResult {
  std::map<std::string, int> counts;           // per colour, over resolved components
  std::map<std::string, int> terminal_counts;  // per colour, pi0 path
  std::map<int, long long> counts_by_degree;   // K-degree -> total, pi0 path
  bool tame = false;
  bool two_path_ok = false;  // per-component colimit equals the terminal value
  int complete_upto = -1;    // all components with a member of K-degree <= this
                             // are resolved at the bound
};
SemifreeResult semifree_coproduct(const FinSetAlgebra& X,
                                  const std::map<std::string, std::vector<std::string>>& K,
                                  int bound);

// ---------- pushout problems ----------

struct PushoutProblem {
  FinSetAlgebra R;
  std::map<std::string, std::vector<std::string>> K, L;
  std::function<int(const std::string&, int)> u;      // K -> L
  std::function<int(const std::string&, int)> alpha;  // K -> carrier(R)
};

struct FiltrationStage {
  int k;
  std::map<std::string, int> P;    // per colour size of P_k
  std::map<std::string, int> Q;    // colim over the punctured slice
  std::map<std::string, int> L;    // colim over the all-L slice
  std::map<std::string, int> pushout_check;  // pushout of the square, per colour
};

struct FiltrationResult {
  std::vector<FiltrationStage> stages;
  bool squares_ok = true;  // pushout of each square equals the direct P_k
  std::string detail;
};

FiltrationResult pushout_filtration(const PushoutProblem& prob, int kmax, int bound);

// term-model congruence-closure oracle; per colour class counts of terms
// with at most kcap K/L-generators (matched truncation with the filtration)
struct OracleResult {
  std::map<std::string, std::vector<int>> counts_by_degree;  // colour -> per k
  bool stabilized = true;
};
OracleResult pushout_oracle(const PushoutProblem& prob, int kcap, int scap);

// ---------- exact linear world ----------

struct VectAlgebra {
  MonadPtr T;
  Scalar scalar = Scalar::Q;
  std::map<std::string, int> dims;
  // action matrix of an op: (product of source dims) x (target dim), with
  // row-major tuple order on the domain basis
  std::function<Mat<Rational>(OpId)> act;
};

struct VectPushoutProblem {
  VectAlgebra R;
  std::map<std::string, int> K, L;
  std::function<Mat<Rational>(const std::string&)> u;      // dim K -> dim L
  std::function<Mat<Rational>(const std::string&)> alpha;  // dim K -> dim R
};

struct VectFiltrationStage {
  int k;
  std::map<std::string, int> P;  // dimensions
};
struct VectFiltrationResult {
  std::vector<VectFiltrationStage> stages;
};
VectFiltrationResult vect_pushout_filtration(const VectPushoutProblem& prob, int kmax,
                                             int bound);
struct VectOracleResult {
  std::map<std::string, std::vector<int>> dims_by_degree;
};
VectOracleResult vect_pushout_oracle(const VectPushoutProblem& prob, int kcap, int scap);

// ---------- chain complexes over F_p ----------

struct ChainComplex {
  long long p = 2;
  int lo = 0;                 // lowest degree
  std::vector<int> dims;      // dims[d - lo]
  std::vector<Mat<Fp>> diff;  // diff[i]: C_{lo+i+1} -> C_{lo+i}

  int dim(int d) const {
    return d < lo || d >= lo + (int)dims.size() ? 0 : dims[d - lo];
  }
  bool valid() const;          // d . d = 0 and shape consistency
  std::map<int, int> homology() const;
  bool acyclic() const;
};

ChainComplex chain_tensor(const ChainComplex& a, const ChainComplex& b);
// coequalizer of id and the Koszul-signed twist on C (x) C
ChainComplex sym2_quotient(const ChainComplex& c);
// same computation with rational coefficients (signs active): homology dims
std::map<int, int> sym2_quotient_homology_Q(const ChainComplex& c_shape);

// search a small acyclic complex over F_2 whose symmetric square has
// dim H_0 = 2; returns the complex found
std::optional<ChainComplex> find_char2_witness();

}  // namespace polymnd
