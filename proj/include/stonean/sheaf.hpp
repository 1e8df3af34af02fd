#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stonean/balg.hpp"
#include "stonean/bvm.hpp"
#include "stonean/fintop.hpp"
#include "stonean/topo.hpp"

namespace stonean::sheaf {

/// Model structure carried along by presheaves that come from a boolean-valued
/// model: every section names, at each point of its level, a model element.
struct StructureTag {
  std::shared_ptr<const bvm::BVModel> model;
  std::vector<int> point_atom;                    // space point -> atom of model->algebra
  std::vector<std::vector<std::vector<int>>> rep;  // [level][section][point], -1 off the level
};

/// A presheaf of finite sets on a family of nonempty open sets ("levels") of a
/// finite space, ordered by inclusion.
struct Presheaf {
  topo::FinTop space;
  std::vector<Subset> levels;
  std::vector<std::vector<std::string>> sections;
  /// res[p * levels.size() + q] maps sections(p) -> sections(q) when levels[q] ⊆ levels[p].
  std::vector<std::vector<int>> res;
  std::optional<StructureTag> tag;

  int level_count() const { return static_cast<int>(levels.size()); }
  int level_index(Subset u) const;  // -1 if absent
  bool below(int q, int p) const { return levels[q].subset_of(levels[p]); }
  const std::vector<int>& restriction(int p, int q) const { return res[p * levels.size() + q]; }
  int restrict(int p, int q, int f) const { return restriction(p, q)[f]; }
  int section_index(int level, const std::string& id) const;
  /// Point labels joined by '+'.
  std::string level_key(int q) const;
  /// Throws InputError when identity or composition laws fail.
  void check_functorial() const;
  bool is_level_surjective_from_top() const;
};

/// Builds a presheaf from a restriction callback; levels must be distinct nonempty opens.
Presheaf make_presheaf(topo::FinTop space, std::vector<Subset> levels,
                       std::vector<std::vector<std::string>> sections,
                       const std::function<int(int p, int q, int f)>& restrict);

/// All nonempty opens of x (𝒪(X)⁺), ordered by size.
std::vector<Subset> open_levels(const topo::FinTop& x);
/// The nonempty regular opens of x (RO(X)⁺), ordered by size.
std::vector<Subset> regular_levels(const topo::FinTop& x);
/// Keeps only the given levels.
Presheaf restrict_levels(const Presheaf& f, const std::vector<Subset>& keep);

enum class Coverage { Dense, Sup };

bool is_covering(const Presheaf& f, Coverage c, int p, const std::vector<int>& members);

struct CollationWitness {
  int level = -1;
  std::vector<int> covering;
  std::vector<int> family;  // section index per covering member
  int collations = 0;
};

struct SheafReport {
  bool pass = true;
  std::size_t coverings = 0;
  std::size_t families = 0;
  std::optional<CollationWitness> witness;
};

/// At most one collation for every compatible family on a dense covering.
SheafReport is_separated(const Presheaf& f);
/// Exactly one collation for every compatible family on a dense covering.
SheafReport is_stonean_sheaf(const Presheaf& f);
/// Exactly one collation for every compatible family on a covering with supremum p.
SheafReport is_topological_sheaf(const Presheaf& f);
SheafReport check_coverings(const Presheaf& f, Coverage c, bool need_existence);

/// A finite bundle: germs over the points of a base, with a family of basic opens
/// of the total space.
struct EtaleSpace {
  topo::FinTop base;
  std::vector<std::string> germs;
  std::vector<std::string> germ_value;          // display name of the germ without its point
  std::vector<int> proj;
  std::vector<std::pair<int, int>> germ_rep;    // (level, section) of the originating presheaf
  std::vector<Subset> basic_opens;
  std::vector<std::pair<int, int>> provenance;  // (level, section) behind each basic open
  std::shared_ptr<const bvm::BVModel> model;    // set when germs carry model elements
  std::vector<int> germ_element;
  std::vector<int> point_atom;
  /// Per base point: (level, section) -> germ index.
  std::vector<std::map<std::pair<int, int>, int>> germ_lookup;

  int size() const { return static_cast<int>(germs.size()); }
  Subset stalk(int x) const;
  topo::FinTop total_space() const;
  bool is_ed_bundle() const;
};

struct EtaleChecks {
  bool hausdorff = true;
  bool zero_dimensional = true;
  bool stalks_discrete = true;
  bool stalks_closed = true;
  bool local_homeomorphism = true;
  bool all() const { return hausdorff && zero_dimensional && stalks_discrete && stalks_closed && local_homeomorphism; }
};

EtaleChecks check_etale(const EtaleSpace& e);

/// Germs at points, f ~x g iff they agree on a level W with x ∈ W.
EtaleSpace lambda0(const Presheaf& f);
/// Continuous sections of the bundle over the open set u, as germ indices per point of u.
std::vector<std::vector<int>> gamma0(const EtaleSpace& e, Subset u);
/// The first continuous section over u in enumeration order, if any.
std::optional<std::vector<int>> gamma0_first(const EtaleSpace& e, Subset u);

/// The bundle over St(RO(X)) of germs along ultrafilters of regular opens.
EtaleSpace lambda1(const Presheaf& f);

/// Sections over u of an extremally disconnected bundle (discrete base, surjective
/// projection). Values may be -1 (the point at infinity) on a nowhere dense set.
std::vector<std::vector<int>> gamma1(const EtaleSpace& e, Subset u);
/// Γ¹ restricted to RO(base)⁺.
Presheaf gamma_half(const EtaleSpace& e);

/// A morphism between presheaves on RO(X0)⁺ and RO(X1)⁺: a homomorphism i between
/// the RO algebras and a natural transformation i_*(F0) -> F1.
struct PresheafMorphism {
  Presheaf source;
  Presheaf target;
  balg::BAHom i;
  std::vector<std::vector<int>> theta;  // per target level: sections of source(π_i V) -> target(V)
};

/// Level of the source presheaf equal to π_i of the given target level.
int pi_level(const PresheafMorphism& m, int target_level);

struct NaturalityReport {
  bool pass = true;
  std::optional<std::pair<int, int>> square;  // (smaller, larger) target levels
};

NaturalityReport check_presheaf_morphism(const PresheafMorphism& m);
/// i_*(F): V ↦ F(π_i V), built on RO(x1)⁺.
Presheaf lift_i_star(const balg::BAHom& i, const Presheaf& f, const topo::FinTop& x1);
/// g ∘ f
PresheafMorphism compose(const PresheafMorphism& g, const PresheafMorphism& f);
bool same_morphism(const PresheafMorphism& a, const PresheafMorphism& b);

/// ext(G)(U) = G(Reg U), from a presheaf on RO(X)⁺ to one on 𝒪(X)⁺.
Presheaf ext(const Presheaf& g);

struct Sheafification {
  EtaleSpace bundle;
  Presheaf sheaf;         // on RO(St(RO(X)))⁺
  PresheafMorphism unit;  // F↾RO(X)⁺ -> sheaf
};

Sheafification sheafify(const Presheaf& f);

/// Level-wise bijections commuting with restrictions. level_map sends levels of a to levels of b.
std::optional<std::vector<std::vector<int>>> find_presheaf_isomorphism(const Presheaf& a, const Presheaf& b,
                                                                       const std::vector<int>& level_map);
/// Level correspondence matching levels by equal point sets under a point bijection.
std::vector<int> level_map_by_points(const Presheaf& a, const Presheaf& b, const std::vector<int>& point_map);

/// Every natural transformation i_*(F) -> S for every homomorphism i.
std::vector<PresheafMorphism> all_morphisms(const Presheaf& f, const Presheaf& s);

struct UniversalReport {
  bool pass = true;
  std::size_t morphisms = 0;
  std::optional<std::string> failure;
};

/// Every morphism F -> S factors through the unit of F in exactly one way.
UniversalReport check_universal_property(const Presheaf& f, const Presheaf& s);

/// Random presheaf of local functions on x: stalk values per point, sections are
/// functions on levels closed under restriction; with probability dup a section gets
/// an extra copy that restricts like it (breaking separation).
Presheaf random_presheaf(const topo::FinTop& x, const std::vector<Subset>& levels, int max_stalk, double dup,
                         std::mt19937_64& rng, int max_sections = 0);

}  // namespace stonean::sheaf
