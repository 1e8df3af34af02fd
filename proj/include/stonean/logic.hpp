#pragma once

#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace stonean::logic {

/// Relational signature; `=` is always available and never declared.
struct Signature {
  std::map<std::string, int> relations;
  std::set<std::string> constants;

  /// Throws InputError on clashing symbols or nonpositive arity.
  void validate() const;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Prefix marking an element constant c_σ whose meaning is supplied by the model.
inline constexpr const char* kElementPrefix = "c_";

struct Term {
  enum class Kind { Var, Const };
  Kind kind = Kind::Var;
  std::string name;

  static Term var(std::string n) { return {Kind::Var, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::Const, std::move(n)}; }
  bool is_var() const { return kind == Kind::Var; }
  friend bool operator==(const Term&, const Term&) = default;
};

enum class Op { Rel, Eq, Not, And, Or, Implies, Exists, Forall };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Op op;
  std::string symbol;       // relation symbol, or the bound variable of a quantifier
  std::vector<Term> terms;  // Rel and Eq
  std::vector<Formula> kids;
};

Formula rel(std::string r, std::vector<Term> ts);
Formula eq(Term a, Term b);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula exists(std::string v, Formula body);
Formula forall(std::string v, Formula body);

bool equal(const Formula& a, const Formula& b);

/// Parses the fully parenthesised text grammar. Throws ParseError.
Formula parse(const Signature& sig, const std::string& text);
std::string print(const Formula& f);

std::set<std::string> free_vars(const Formula& f);
/// Free variables in order of first occurrence.
std::vector<std::string> free_vars_ordered(const Formula& f);
/// Replaces the free occurrences of v by the constant c.
Formula substitute(const Formula& f, const std::string& v, const std::string& c);
/// Element constants (c_ prefixed, undeclared) occurring in f.
std::set<std::string> element_constants(const Formula& f, const Signature& sig);
int quantifier_depth(const Formula& f);
int size(const Formula& f);

/// Formulas over the variables `vars` built in layers: layer 0 holds the atomic
/// formulas, each later layer adds ¬, ∧ of two earlier formulas and ∃ over a free
/// variable. Deduplicated by printed form; `limit` caps the list length (0 = none).
std::vector<Formula> generate_formulas(const Signature& sig, const std::vector<std::string>& vars,
                                       int depth, std::size_t limit = 0);

/// A random AST of the given maximum depth using every connective.
Formula random_formula(const Signature& sig, int depth, std::mt19937_64& rng);

}  // namespace stonean::logic
