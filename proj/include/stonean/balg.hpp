#pragma once

#include <memory>
#include <string>
#include <vector>

#include "stonean/fintop.hpp"
#include "stonean/subset.hpp"

namespace stonean::balg {

class Elem;

/// A finite boolean algebra, always presented as the powerset of a labelled
/// atom set. Copies share the underlying data.
class BoolAlg {
 public:
  BoolAlg() = default;

  int atom_count() const { return static_cast<int>(data_->labels.size()); }
  const std::vector<std::string>& labels() const { return data_->labels; }
  const std::string& label(int atom) const { return data_->labels[atom]; }
  int atom_index(const std::string& label) const;  // -1 if absent
  std::size_t element_count() const { return std::size_t{1} << atom_count(); }

  Elem top() const;
  Elem bottom() const;
  Elem atom(int i) const;
  Elem elem(Subset bits) const;
  /// Parses "0", "1", "a1", "a1∨a2", "a1,a2" or "a1|a2".
  Elem parse(const std::string& text) const;
  Elem from_labels(const std::vector<std::string>& labels) const;
  /// Every element, ordered by bit pattern. Requires atom_count() <= 20.
  std::vector<Elem> elements() const;

  /// Two handles denote the same algebra if they share data or have equal atom labels.
  bool same_as(const BoolAlg& other) const;
  void require_same(const BoolAlg& other) const;

  /// Exhaustive check of the boolean algebra laws over all pairs and triples.
  /// Returns the first violated law or an empty string.
  std::string check_axioms() const;

  /// "a1∨a2", "0", and " = 1" appended for the top element.
  std::string format(Subset bits) const;

  friend BoolAlg mk_powerset(std::vector<std::string> labels);

 private:
  struct Data {
    std::vector<std::string> labels;
  };
  std::shared_ptr<const Data> data_;
  friend class Elem;
};

/// Powerset algebra on the given atom labels. Labels must be nonempty and distinct.
BoolAlg mk_powerset(std::vector<std::string> labels);

class Elem {
 public:
  Elem() = default;
  Elem(BoolAlg alg, Subset bits);

  const BoolAlg& algebra() const { return alg_; }
  Subset bits() const { return bits_; }
  bool is_top() const { return bits_ == Subset::full(alg_.atom_count()); }
  bool is_bottom() const { return bits_.empty(); }
  bool is_atom() const { return bits_.size() == 1; }

  Elem operator&(const Elem& o) const;
  Elem operator|(const Elem& o) const;
  Elem operator~() const;
  bool leq(const Elem& o) const;
  bool operator==(const Elem& o) const;

  std::string str() const { return alg_.format(bits_); }
  /// Sorted list of atom labels.
  std::vector<std::string> atom_labels() const;

 private:
  BoolAlg alg_;
  Subset bits_;
};

/// A filter on a finite algebra; always principal, stored by its generator.
class Filter {
 public:
  Filter(Elem generator);

  const BoolAlg& algebra() const { return gen_.algebra(); }
  const Elem& generator() const { return gen_; }
  bool contains(const Elem& b) const { return gen_.leq(b); }
  bool contains(Subset b) const { return gen_.bits().subset_of(b); }
  bool is_ultra() const { return gen_.is_atom(); }
  std::string str() const;

 private:
  Elem gen_;
};

/// Unital homomorphism i: source -> target, stored as a map from the atoms of
/// the target to the atoms of the source; i(b) = {c : atom_map[c] ∈ b}.
class BAHom {
 public:
  BAHom(BoolAlg source, BoolAlg target, std::vector<int> atom_map);

  static BAHom identity(const BoolAlg& b);
  /// Recovers the atom map of an arbitrary function given on all elements and
  /// verifies that the function is a unital homomorphism (throws otherwise).
  static BAHom from_function(const BoolAlg& source, const BoolAlg& target,
                             const std::vector<Subset>& table);

  const BoolAlg& source() const { return source_; }
  const BoolAlg& target() const { return target_; }
  const std::vector<int>& atom_map() const { return atom_map_; }

  Elem operator()(const Elem& b) const;
  Subset apply(Subset b) const;

  /// The left adjoint π_i(c) = ⋀{b : i(b) ≥ c}, computed as the image of c under the atom map.
  Elem left_adjoint(const Elem& c) const;
  Subset left_adjoint(Subset c) const;

  bool injective() const;
  bool surjective() const;
  bool iso() const { return injective() && surjective(); }

  friend bool operator==(const BAHom& a, const BAHom& b);

 private:
  BoolAlg source_;
  BoolAlg target_;
  std::vector<int> atom_map_;
};

/// g ∘ f
BAHom compose(const BAHom& g, const BAHom& f);

std::vector<Filter> ultrafilters(const BoolAlg& b);

/// The Stone space of a finite algebra: the discrete space whose points are
/// the ultrafilters G_a, with N_b = {G_a : a ≤ b}.
struct StoneSpace {
  BoolAlg algebra;
  topo::FinTop space;

  Subset clopen(const Elem& b) const;
  Elem from_clopen(Subset n) const;
};

StoneSpace stone_space(const BoolAlg& b);

/// B/F, realised as the powerset on the atoms below the generator of F.
struct Quotient {
  BoolAlg algebra;
  BAHom proj;
  /// Atoms of the quotient in terms of atoms of B.
  std::vector<int> atoms;
};

Quotient quotient(const Filter& f);

/// π*_i(G) = i⁻¹[G] for every ultrafilter G of the target, computed as a preimage of
/// filters and returned as atom indices of the source.
std::vector<int> dual_map(const BAHom& i);

/// Rebuilds a homomorphism from a point map between Stone spaces: b ↦ f⁻¹[N_b].
BAHom hom_from_dual(const BoolAlg& source, const BoolAlg& target, const std::vector<int>& dual);

}  // namespace stonean::balg
