#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stonean/balg.hpp"
#include "stonean/fintop.hpp"

namespace stonean::topo {

/// RO(X) re-atomised: atoms are the minimal nonempty regular opens, and every
/// element keeps its concrete regular-open set.
struct ROAlgebra {
  FinTop space;
  balg::BoolAlg algebra;
  std::vector<Subset> atom_sets;

  /// Reg of the union of the atoms of e.
  Subset to_set(Subset e) const;
  Subset to_set(const balg::Elem& e) const { return to_set(e.bits()); }
  /// Atoms below a regular open set; throws if the set is not regular open.
  Subset from_set(Subset u) const;
  balg::Elem elem(Subset u) const { return algebra.elem(from_set(u)); }

  /// The operations as defined on regular opens directly.
  Subset join(Subset u, Subset v) const { return space.regularize(u | v); }
  Subset meet(Subset u, Subset v) const { return u & v; }
  Subset negate(Subset u) const { return space.closure(u).complement(space.size()); }
};

ROAlgebra ro_algebra(const FinTop& x);

/// Checks the complete boolean algebra laws on the concrete regular-open sets
/// (joins of arbitrary subfamilies are Reg of the union). Returns the first failure.
std::string check_ro_laws(const ROAlgebra& ro);

struct ClopAlgebra {
  FinTop space;
  balg::BoolAlg algebra;
  std::vector<Subset> atom_sets;
  Subset to_set(Subset e) const;
};

ClopAlgebra clop_algebra(const FinTop& x);
std::vector<Subset> clopens(const FinTop& x);
/// CLOP(X) = RO(X) as set families.
bool is_extremally_disconnected(const FinTop& x);

struct Completion {
  FinPoset poset;
  ROAlgebra ro;
  /// e(p) = Reg(↓p), as an element of ro.algebra.
  std::vector<balg::Elem> e;

  bool order_preserving() const;
  bool incompatibility_preserving() const;
  /// Every nonzero element lies above some e(p).
  bool dense() const;
};

Completion boolean_completion(const FinPoset& p);

/// k̄_f as a homomorphism RO(target) -> RO(source), with the RO algebras it connects.
struct InducedHom {
  ContMap map;
  ROAlgebra ro_source;
  ROAlgebra ro_target;
  balg::BAHom hom;

  /// Reg(f[V]) for a regular open V of the source.
  Subset reg_image(Subset v) const;
  /// First open U of the target with Reg(f⁻¹[U]) ≠ f⁻¹[Reg U], if any.
  std::optional<Subset> preimage_identity_failure() const;
  /// First regular open V whose left adjoint differs from Reg(f[V]), if any.
  std::optional<Subset> adjoint_mismatch() const;
};

/// Rejects maps that are not continuous or not open, naming the offending open set.
InducedHom induced_ro_hom(const ContMap& f);

/// First open U of f.target with Reg(f⁻¹[U]) ≠ f⁻¹[Reg U]; works for any continuous f.
std::optional<Subset> preimage_identity_failure(const ContMap& f);

bool is_dense(const FinTop& x, Subset a);
bool is_nowhere_dense(const FinTop& x, Subset a);
/// A family of nonempty opens is a dense covering of the open set u if every nonempty
/// open v ⊆ u has a nonempty open common refinement with some member.
bool is_dense_covering(const FinTop& x, const std::vector<Subset>& family, Subset u);

/// All topologies on n points (n <= 4), listed through their specialisation preorders.
std::vector<FinTop> all_topologies(int n);
/// All partial orders on n labelled elements (n <= 4).
std::vector<FinPoset> all_posets(int n);

}  // namespace stonean::topo
