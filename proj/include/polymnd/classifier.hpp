#pragma once
// Internal-algebra classifier categories: the semi-free coproduct classifier
// (objects: T-operations with fiber edges coloured X/K) and the free-algebra
// extension classifier (colours X/K/L, with F- and G-generators). Component
// analysis, terminal detection, tameness certification, the diamond-lemma
// checker and the pi0 polynomial of a tame monad.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polymnd/monad.hpp"

namespace polymnd {

enum class ClsKind { Semifree, Extension };

struct ClsObject {
  OpId op = -1;
  std::vector<char> col;  // per slot: 'X', 'K' (, 'L' in the extension case)

  bool operator<(const ClsObject& o) const {
    return std::tie(op, col) < std::tie(o.op, o.col);
  }
  bool operator==(const ClsObject& o) const { return op == o.op && col == o.col; }
  int degree() const {
    int d = 0;
    for (char c : col)
      if (c != 'X') ++d;
    return d;
  }
  int kcount() const {
    int d = 0;
    for (char c : col)
      if (c == 'K') ++d;
    return d;
  }
};

// morphism source -> target, given by substitution data on the target:
// X-slots carry a base operation with an X/K colouring of its fiber,
// L-slots carry the flag "pull back along f".
struct ClsMorphism {
  ClsObject source, target;
  // per target slot: for X-slots (op, colouring); for K-slots (unit, {});
  // for L-slots op = -2 when f is used, -1 for the unit
  struct Entry {
    OpId op = -1;
    std::vector<char> col;
    bool use_f = false;
  };
  std::vector<Entry> data;

  bool operator<(const ClsMorphism& o) const;
  bool operator==(const ClsMorphism& o) const;
};

class Classifier {
 public:
  Classifier(MonadPtr T, ClsKind kind, int bound);

  const std::vector<ClsObject>& objects() const { return objects_; }
  int object_index(const ClsObject& o) const;
  std::string object_key(const ClsObject& o) const;
  std::string object_text(const ClsObject& o) const;

  // the classifier component (colour in the base monad) an object lives over
  std::string component_colour(const ClsObject& o) const;

  // source of the morphism determined by substitution data on `target`
  ClsObject apply(const ClsObject& target, const std::vector<ClsMorphism::Entry>& data,
                  std::vector<int>* slot_map = nullptr,
                  std::vector<std::pair<int, int>>* origin = nullptr) const;

  // all morphisms with the given target whose source stays within the bound;
  // exact_delta restricts to sources of size exactly size(target)+delta
  // (sizes are additive under substitution); single_slot restricts the data
  // to at most one non-unit entry (these generate the category)
  std::vector<ClsMorphism> morphisms_into(const ClsObject& target,
                                          std::optional<int> exact_delta = std::nullopt,
                                          bool single_slot = false) const;

  // complete hom set (exact: sizes are additive, so the data search is
  // bounded by the size difference)
  std::vector<ClsMorphism> hom(const ClsObject& a, const ClsObject& b) const;

  // does the object have two adjacent X-slots? such objects are never
  // terminal: the unit bead on the shared edge has two parses
  bool has_adjacent_x(const ClsObject& o) const;

  ClsMorphism identity(const ClsObject& a) const;
  ClsMorphism compose(const ClsMorphism& second, const ClsMorphism& first) const;

  MonadPtr monad() const { return T_; }
  int bound() const { return bound_; }
  ClsKind kind() const { return kind_; }

 private:
  MonadPtr T_;
  ClsKind kind_;
  int bound_;
  std::vector<ClsObject> objects_;
  std::map<std::string, int> index_;
  std::map<std::string, std::vector<OpId>> xcands_;  // per colour, prefilled
  std::map<std::string, int> unit_size_;
  int max_shrink_ = 0;
  const std::vector<OpId>& x_candidates(const std::string& colour) const;
};

struct ComponentReport {
  std::vector<ClsObject> members;
  bool closed = false;  // terminal-candidate set provably complete
  std::vector<ClsObject> terminal_candidates;  // |hom(a,t)|=1 for all members a
  // per refuted candidate: a witness a with |hom(a,t)| != 1
  struct Refutation {
    ClsObject candidate;
    ClsObject witness;
    int hom_count;
  };
  std::vector<Refutation> refutations;
  std::string verdict;  // unique-terminal / no-terminal-witness /
                        // automorphism-obstruction / inconclusive
};

std::vector<ComponentReport> components(const Classifier& cls, bool parallel = true);

struct TameReport {
  std::string verdict;  // tame-at-bound / not-tame / inconclusive
  std::vector<ComponentReport> comps;
  std::string detail;
};

TameReport tame_report(const MonadPtr& T, int bound);

// the pi0 polynomial of a tame monad: one operation per component terminal
struct Pi0Polynomial {
  std::vector<ClsObject> terminals;
};
Pi0Polynomial pi0_polynomial(const MonadPtr& T, int bound);

// ---------- extension classifier machinery ----------

struct ExtensionFiltration {
  // chosen terminal objects of the all-X-morphism classifier (ho), the
  // object set of ts; stratified by degree
  std::vector<ClsObject> ts_objects;
  // parallel flags: the object's ho-component was non-trivially resolved at
  // the bound (fringe singletons are bound artifacts)
  std::vector<bool> ts_resolved;
  // per degree k: W^(k) component object lists (each should be a k-cube)
  struct Cube {
    int k;
    std::vector<ClsObject> objects;
    bool is_cube;
  };
  std::vector<Cube> cubes;
  bool all_cubes = true;
  bool l_final_discrete = true;
  bool ts_final = true;  // undercategory non-empty and connected (bounded)
  bool fg_squares_ok = true;
  std::string detail;
};

ExtensionFiltration extension_filtration(const MonadPtr& T, int bound);

// ---------- diamond lemma ----------

struct DiamondReport {
  bool parallel_ok = true;
  bool spans_ok = true;
  bool directed_ok = true;
  std::string witness;
  bool terminal_match = true;  // conclusion cross-checked against detection
};

// runs on the truncated semifree classifier; dim: objects -> int must
// strictly increase along generators when supplied
DiamondReport diamond_check(const Classifier& cls,
                            const std::function<long long(const ClsObject&)>& dim);

// default dimension function: lexicographic (size decreasing, then the
// supplied tie-break which defaults to 0)
std::function<long long(const ClsObject&)> default_dimension(
    const Classifier& cls, const std::function<long long(const ClsObject&)>& tie);

// JSON certificate for tame_report, replayable by verify_certificate
std::string tame_certificate_json(const MonadPtr& T, int bound, const TameReport& rep);
// recomputes every hom cardinality cited; returns empty string on success,
// else a description of the first mismatch
std::string verify_certificate(const std::string& json_text);

}  // namespace polymnd
