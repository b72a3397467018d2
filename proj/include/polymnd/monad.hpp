#pragma once
// Polynomial monads over finite-or-enumerated colour sets. Operations are
// interned per monad; substitution returns the composite together with the
// induced fiber bijection (result slot -> (argument, argument slot)).

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace polymnd {

using OpId = int;

struct SubstResult {
  OpId op = -1;
  std::vector<std::pair<int, int>> slot_origin;
};

class PolynomialMonad {
 public:
  virtual ~PolynomialMonad() = default;
  virtual std::string name() const = 0;

  virtual std::string colour_of(OpId b) = 0;
  virtual std::vector<std::string> sources(OpId b) = 0;
  int arity(OpId b) { return (int)sources(b).size(); }
  virtual int size(OpId b) = 0;  // number of edges of the underlying shape
  virtual bool is_unit(OpId b) = 0;
  virtual OpId unit(const std::string& colour) = 0;
  virtual SubstResult substitute(OpId b, const std::vector<OpId>& args) = 0;
  // every operation of size <= max_size, duplicate-free
  virtual std::vector<OpId> enumerate(int max_size) = 0;
  virtual std::string op_key(OpId b) = 0;
  virtual std::string op_text(OpId b) { return op_key(b); }
  // colours of operations within the bound (used to index collections)
  std::vector<std::string> colours(int max_size);

  // geometric tie-break used by the diamond lemma's dimension function
  // (Getzler-Jones dimension for the n-operad families; 0 elsewhere)
  virtual long long op_dimension(OpId) { return 0; }

  // pairs of fiber slots joined by an edge of the underlying structure
  // (vertex adjacency); drives the bead-expansion analysis in the classifier
  virtual std::vector<std::pair<int, int>> slot_adjacency(OpId) { return {}; }

  // size-policy flags used by the classifier's closure analysis
  // ops with empty fiber (allow vertex-deleting substitutions)
  virtual bool has_nullary_ops() const = 0;
  // non-unit arity-preserving single-vertex substitutions (quasibijection
  // corollas, leaf relabellings); units aside, substitution then never
  // decreases size
  virtual bool has_size_preserving_subs() const = 0;

  std::vector<OpId> enumerate_colour(const std::string& colour, int max_size);
};

using MonadPtr = std::shared_ptr<PolynomialMonad>;

// ---------- builtin catalogue ----------

struct BuiltinInfo {
  std::string name;
  std::string insertional_class;
  std::string table_verdict;  // "yes" / "no" / "n/a"
};

std::vector<BuiltinInfo> builtin_catalogue();
// Throws on unknown name. Params like "2" for n-operad families are part of
// the name: "O(2)", "NO(2)", "CFO(2)", "RO(2)".
MonadPtr builtin(const std::string& name);

// user-defined finite polynomial monads from JSON (see README schema)
MonadPtr finite_monad_from_json(const std::string& text);

// derived monads
enum class Derived { TPlus1, TPlus2, Tf, Tg, Tfg };
MonadPtr derive(const MonadPtr& base, Derived which);
// Baez-Dolan plus construction
MonadPtr plus(const MonadPtr& base);

// colour tags used by the derived monads
inline std::string tag_colour(const std::string& c, char tag) {
  return std::string(1, tag) + ":" + c;
}

// accessors into derived-monad operations (valid on monads built by derive())
namespace derived_access {
char kind_of(const MonadPtr& m, OpId b);          // 'm','k','l','f'
OpId base_op_of(const MonadPtr& m, OpId b);       // for kind 'm'
std::vector<char> colouring_of(const MonadPtr& m, OpId b);
OpId mixed(const MonadPtr& m, OpId base_op, const std::vector<char>& col);
OpId f_op(const MonadPtr& m, const std::string& base_colour);
OpId g_op(const MonadPtr& m, const std::string& base_colour);
MonadPtr base_of(const MonadPtr& m);
}  // namespace derived_access

// ---------- generic algorithms ----------

struct LawReport {
  bool ok = true;
  std::string witness;
  long long checked = 0;
};

// unit laws and two-route substitution agreement for all composites whose
// total size stays within the bound
LawReport check_monad_laws(const MonadPtr& T, int bound);

// finite collections: per colour a list of element names
struct Collection {
  std::map<std::string, std::vector<std::string>> at;
  int size_at(const std::string& c) const {
    auto it = at.find(c);
    return it == at.end() ? 0 : (int)it->second.size();
  }
};

struct EvalElement {
  OpId op;
  std::vector<int> assignment;  // per slot: index into X at the slot's colour
};

// polynomial functor evaluation with provenance
std::map<std::string, std::vector<EvalElement>> eval(const MonadPtr& T,
                                                     const Collection& X, int bound);

// T-operations (b, sigma): sigma a linear re-ordering of the fiber
struct TOperation {
  OpId op;
  std::vector<int> sigma;  // position -> slot
};

struct OperadView {
  // gamma((b,s); (b_i,s_i)) with arity/colour checking
  static TOperation compose(const MonadPtr& T, const TOperation& outer,
                            const std::vector<TOperation>& inner);
  static std::vector<std::string> source_list(const MonadPtr& T, const TOperation& t);
};

// cartesian morphisms of polynomial monads, given colour and op maps at a
// bound; validates the pullback condition and unit/substitution compatibility
struct CartesianMonadMap {
  MonadPtr src, dst;
  std::function<std::string(const std::string&)> delta;
  std::function<OpId(OpId)> phi;
};

struct CartesianReport {
  bool ok = true;
  std::string witness;
};

CartesianReport validate_cartesian(CartesianMonadMap& f, int bound);

}  // namespace polymnd
