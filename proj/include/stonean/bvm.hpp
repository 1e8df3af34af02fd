#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stonean/balg.hpp"
#include "stonean/logic.hpp"

namespace stonean::bvm {

using logic::Formula;
using logic::Signature;

/// Index of a tuple in a row-major table over a domain of size n.
std::size_t tuple_index(const std::vector<int>& tuple, int n);
std::vector<int> tuple_at(std::size_t index, int arity, int n);
std::size_t table_size(int arity, int n);

/// A B-valued structure for a relational signature. Truth values are stored as
/// atom subsets of `algebra`.
struct BVModel {
  balg::BoolAlg algebra;
  Signature sig;
  std::vector<std::string> domain;
  std::vector<Subset> eq;                             // n*n
  std::map<std::string, std::vector<Subset>> rel;     // n^arity per relation
  std::map<std::string, int> constants;
  /// Extra names resolving to domain elements (used by quotients so that c_σ
  /// keeps naming the class of σ).
  std::map<std::string, int> aliases;

  int size() const { return static_cast<int>(domain.size()); }
  Subset eq_bits(int s, int t) const { return eq[s * size() + t]; }
  Subset rel_bits(const std::string& r, const std::vector<int>& tuple) const;
  balg::Elem eq_value(int s, int t) const { return algebra.elem(eq_bits(s, t)); }
  balg::Elem rel_value(const std::string& r, const std::vector<int>& tuple) const {
    return algebra.elem(rel_bits(r, tuple));
  }
  int index_of(const std::string& id) const;  // -1 if absent
  /// Element named by a constant: a declared constant, c_<id> for a domain element or alias.
  int resolve(const std::string& constant) const;

  /// Empty tables sized for the domain: equality is the identity pattern, relations are 0.
  static BVModel blank(balg::BoolAlg alg, Signature sig, std::vector<std::string> domain);
};

struct Violation {
  std::string axiom;  // reflexivity, symmetry, transitivity, congruence
  std::string relation;
  std::vector<int> elements;
  std::string detail;
};

struct ValidationReport {
  bool valid = true;
  bool extensional = true;
  std::vector<Violation> violations;
};

ValidationReport validate(const BVModel& m);

/// Variable assignment used during evaluation.
using Env = std::vector<std::pair<std::string, int>>;

/// ⟦φ⟧ for a closed formula over L_M. Throws InputError for unknown constants or free variables.
balg::Elem eval(const BVModel& m, const Formula& f);
Subset eval_bits(const BVModel& m, const Formula& f, Env& env);

struct QuotientModel {
  BVModel model;
  balg::Quotient algebra;
  std::vector<int> class_of;  // original element -> class index
  std::vector<int> reps;      // class index -> least original element
};

QuotientModel quotient_model(const BVModel& m, const balg::Filter& f);

/// An ordinary two-valued structure.
struct TarskiModel {
  Signature sig;
  std::vector<std::string> domain;
  std::map<std::string, std::vector<bool>> rel;
  std::map<std::string, int> constants;
  std::map<std::string, int> aliases;

  int size() const { return static_cast<int>(domain.size()); }
  int resolve(const std::string& constant) const;
};

struct TarskiQuotient {
  TarskiModel model;
  std::vector<int> class_of;
  std::vector<int> reps;
};

TarskiQuotient tarski_quotient(const BVModel& m, const balg::Filter& g);
bool satisfies(const TarskiModel& t, const Formula& f);
bool satisfies(const TarskiModel& t, const Formula& f, Env& env);

/// Formulas used by the depth-bounded checks: the layered enumeration over the
/// variables x and y (see logic::generate_formulas).
std::vector<Formula> check_formulas(const Signature& sig, int depth);

struct WitnessCover {
  Formula formula;           // ∃x ψ, closed
  balg::Elem value;
  std::vector<int> witnesses;
};

struct FullnessReport {
  int depth = 0;
  std::size_t formulas = 0;
  std::size_t instances = 0;
  bool los_pass = true;      // procedure (a)
  bool cover_pass = true;    // procedure (b)
  bool agree = true;
  bool full() const { return los_pass && cover_pass && agree; }
  /// First failure of the Łoś test: formula instance and ultrafilter atom.
  std::optional<std::pair<std::string, int>> los_failure;
  std::optional<std::string> cover_failure;
  /// Minimal witness covers of the closed existential formulas of depth <= 1 in the list.
  std::vector<WitnessCover> covers;
};

/// Finite algebras are always well behaved, so is_full only runs the two procedures.
FullnessReport is_full(const BVModel& m, int depth);

/// Least set of elements whose ⟦ψ(τ)⟧ join to ⟦∃x ψ⟧; exact search for small domains.
std::vector<int> minimal_witness_cover(const BVModel& m, const Formula& exists_formula);

struct MixingReport {
  bool pass = true;
  std::size_t antichains = 0;
  std::vector<Subset> antichain;     // witness on failure
  std::vector<int> assignment;       // τ_a per antichain member
};

/// Antichains are sets of pairwise disjoint nonzero elements, enumerated by size
/// ascending (size >= 2; singletons are mixed trivially). max_size = 0 means no bound.
MixingReport has_mixing(const BVModel& m, int max_size = 0);
std::vector<std::vector<Subset>> antichains(const balg::BoolAlg& b, int max_size = 0);

/// The P(I)-valued product of a family of Tarski structures; element ids join the factor ids with '_'.
BVModel product_model(const std::vector<TarskiModel>& factors);
TarskiModel ultraproduct(const std::vector<TarskiModel>& factors, int index_atom);

struct BVMorphism {
  BVModel source;
  BVModel target;
  balg::BAHom i;  // source.algebra -> target.algebra
  std::vector<int> phi;
};

struct MorphismReport {
  bool morphism = true;
  bool embedding = true;
  bool isomorphism = true;
  std::vector<std::string> failures;
};

MorphismReport check_morphism(const BVMorphism& m);

struct ElementarityReport {
  bool elementary = true;
  std::size_t checked = 0;
  std::optional<std::string> failure;
};

ElementarityReport is_elementary(const BVMorphism& m, int depth);

/// g ∘ f
BVMorphism compose(const BVMorphism& g, const BVMorphism& f);
BVMorphism identity_morphism(const BVModel& m);
/// The same model with truth values moved along an isomorphism of algebras.
BVModel transport(const BVModel& m, const balg::BAHom& iso);

/// Isomorphism up to renaming of elements, over the same algebra: a bijection of domains preserving every table.
std::optional<std::vector<int>> find_model_isomorphism(const BVModel& a, const BVModel& b);

/// Ten closed validities; each must evaluate to 1 in every model over any signature containing R/1.
std::vector<std::string> validity_list();

}  // namespace stonean::bvm
