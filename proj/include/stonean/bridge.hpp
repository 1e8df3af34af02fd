#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stonean/bvm.hpp"
#include "stonean/sheaf.hpp"

namespace stonean::bridge {

using bvm::BVModel;
using bvm::BVMorphism;
using sheaf::Presheaf;
using sheaf::PresheafMorphism;

/// The presheaf b ↦ M/F_b on B⁺, realised on the discrete Stone space. Sections
/// are named by the least element of their class and carry a structure tag.
Presheaf L(const BVModel& m);

/// Domain F(1), equality = Reg of the union of the levels where restrictions agree.
/// Relations and constants are read from the structure tag when present.
/// Throws PreconditionError unless F is a separated presheaf on all nonempty opens of a discrete space.
BVModel R(const Presheaf& f);

/// L on a morphism: [τ]_{π_i V} ↦ [φ(τ)]_V. ls = L(h.source), lt = L(h.target).
PresheafMorphism L_of(const BVMorphism& h, const Presheaf& ls, const Presheaf& lt);
/// R on a morphism of presheaves on discrete bases: f ↦ Θ_1(f↾π_i 1).
BVMorphism R_of(const PresheafMorphism& m);

/// η_M: M → R(L(M)), τ ↦ [τ]_{F_1}. lm = L(m), rlm = R(lm).
BVMorphism unit(const BVModel& m, const Presheaf& lm, const BVModel& rlm);
/// ε_F: L(R(F)) → F, [f]_b ↦ f↾b.
PresheafMorphism counit(const Presheaf& f, const BVModel& rf, const Presheaf& lrf);

struct TriangleReport {
  bool pass = true;
  std::string detail;  // first differing component
};

struct AdjunctionWitness {
  BVMorphism unit;            // η_M
  PresheafMorphism counit;    // ε_F
  TriangleReport triangle_r;  // Id_{R(F)} = Rε_F ∘ η_{R(F)}
  TriangleReport triangle_l;  // Id_{L(M)} = ε_{L(M)} ∘ Lη_M
  bool unit_morphism = true;
  bool counit_natural = true;
  bool unit_iso = false;
  bool counit_iso = false;
  bool pass() const { return triangle_r.pass && triangle_l.pass && unit_morphism && counit_natural; }
};

AdjunctionWitness adjunction_witness(const BVModel& m, const Presheaf& f);

/// Stalk of Λ⁰(L(M)) at every ultrafilter matches the Tarski quotient: germs ↔ classes.
bool stalks_match_quotients(const BVModel& m, const Presheaf& lm, std::string* failure = nullptr);

struct MixingSheafReport {
  bvm::MixingReport mixing;
  sheaf::SheafReport sheaf;
  bool sections_induced = true;
  std::size_t global_sections = 0;
  std::vector<int> stray_section;  // germ per point of a section induced by no element
  std::string stray_text;
  bool agree() const { return mixing.pass == sheaf.pass && sheaf.pass == sections_induced; }
};

MixingSheafReport mixing_iff_sheaf(const BVModel& m, int max_antichain = 0);

struct Mixification {
  BVModel model;
  BVMorphism embedding;
  Presheaf sheaf;  // Γ¹Λ¹L(M) on RO(St(RO(St B)))⁺
  /// Domain ≅ ∏ Tarski quotients, equality = join of agreement atoms.
  bool product_oracle = true;
  std::string oracle_failure;
};

Mixification mixify(const BVModel& m);

struct PhiBundle {
  logic::Formula formula;
  std::vector<std::string> vars;
  balg::Elem b_phi;
  Subset n_b;    // N_{b_φ}
  Subset a_phi;  // A_φ
  /// Over the whole Stone space; stalks outside A_φ are empty.
  sheaf::EtaleSpace space;
  std::vector<std::vector<int>> germ_classes;  // class representatives per germ
  std::vector<std::vector<int>> tuples;        // all tuples of the domain
  std::vector<Subset> values;                  // ⟦φ(σ̄)⟧ per tuple
};

/// Throws PreconditionError when φ has no free variable.
PhiBundle phi_bundle(const BVModel& m, const logic::Formula& phi);

struct ClauseValues {
  bool full = false;            // Łoś form: N_{b_φ} = {G : M/G ⊨ ∃x̄ φ}
  bool dense_equal = false;     // A_φ = N_{b_φ}
  bool closed = false;          // A_φ closed
  bool global_section = false;  // a continuous section over N_{b_φ}
  std::optional<bool> product_section;  // some σ̄ with ⟦φ(σ̄)⟧ ≥ b_φ, when mixing
  bool agree() const {
    return full == dense_equal && full == closed && full == global_section && (!product_section || *product_section == full);
  }
  bool all_true() const { return full && dense_equal && closed && global_section && product_section.value_or(true); }
};

ClauseValues evaluate_clauses(const BVModel& m, const PhiBundle& b, bool mixing);

struct FullnessSectionsReport {
  std::size_t formulas = 0;
  bool mixing = false;
  bool pass = true;  // all clauses agree and hold
  std::optional<std::string> failure;
};

FullnessSectionsReport fullness_via_sections(const BVModel& m, int depth);

}  // namespace stonean::bridge
