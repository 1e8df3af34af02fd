#pragma once

#include <random>

#include "stonean/bvm.hpp"
#include "stonean/sheaf.hpp"

/// Random instances for the property suites.
namespace stonean::sample {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Signature of the sampled models: unary R and binary Q.
logic::Signature model_signature();

/// A valid model over B2, B4 or B8 with 1 to max_domain elements. Each atom picks a
/// partition of the domain and relation values on its blocks, so every model is valid.
bvm::BVModel random_model(std::mt19937_64& rng, int max_atoms = 3, int max_domain = 4);

/// Separated presheaf of local functions on all nonempty subsets of a discrete space with 1 to max_points points.
sheaf::Presheaf random_separated_presheaf(std::mt19937_64& rng, int max_points = 3, int max_stalk = 2, int max_sections = 0);

/// The subpresheaf b ↦ F(b≤1)[F(1)].
sheaf::Presheaf top_image(const sheaf::Presheaf& f);

}  // namespace stonean::sample
