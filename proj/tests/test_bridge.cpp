#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "stonean/bridge.hpp"
#include "stonean/error.hpp"
#include "stonean/fixtures.hpp"
#include "stonean/sample.hpp"

using namespace stonean;
using namespace stonean::bridge;

namespace {

int sections_at(const Presheaf& f, Subset level) { return static_cast<int>(f.sections[f.level_index(level)].size()); }

}  // namespace

TEST_CASE("L of the fixtures") {
  const BVModel mnm = fixtures::mnm();
  const Presheaf l = L(mnm);
  CHECK(l.level_count() == 3);
  CHECK(sections_at(l, Subset::of({0, 1})) == 2);
  CHECK(sections_at(l, Subset::of({0})) == 2);
  CHECK(sections_at(l, Subset::of({1})) == 2);
  CHECK(l.is_level_surjective_from_top());
  CHECK(sheaf::is_separated(l).pass);
  CHECK(stalks_match_quotients(mnm, l));

  const BVModel one = BVModel::blank(fixtures::b4(), {}, {"o"});
  const Presheaf l1 = L(one);
  for (const auto& s : l1.sections) CHECK(s.size() == 1);
  CHECK(sheaf::is_stonean_sheaf(l1).pass);
}

TEST_CASE("stalks of L(M) are the Tarski quotients") {
  std::mt19937_64 rng(sample::kDefaultSeed);
  for (int i = 0; i < 40; ++i) {
    const BVModel m = sample::random_model(rng);
    const Presheaf l = L(m);
    std::string why;
    CHECK_MESSAGE(stalks_match_quotients(m, l, &why), why);
    const sheaf::EtaleSpace e = sheaf::lambda0(l);
    for (int a = 0; a < m.algebra.atom_count(); ++a)
      CHECK(e.stalk(a).size() == oracle::class_count(oracle::classes_at(m, a)));
  }
}

TEST_CASE("R of L is the model again") {
  const BVModel mnm = fixtures::mnm();
  const BVModel r = R(L(mnm));
  CHECK(r.size() == 2);
  CHECK(r.algebra.atom_count() == 2);
  CHECK(r.eq_bits(0, 1).empty());
  CHECK(bvm::validate(r).valid);

  const BVModel mr = fixtures::m_r();
  const BVModel rr = R(L(mr));
  REQUIRE(rr.sig.relations.count("R"));
  CHECK(rr.rel.at("R")[0].size() == 1);
  CHECK(rr.rel.at("R")[1].size() == 1);
  CHECK(rr.rel.at("R")[0] != rr.rel.at("R")[1]);

  // An untagged presheaf gives an equality-only model.
  const topo::FinTop d = topo::FinTop::discrete({"x"});
  const Presheaf single = sheaf::make_presheaf(d, {Subset::of({0})}, {{"*"}}, [](int, int, int) { return 0; });
  const BVModel rs = R(single);
  CHECK(rs.size() == 1);
  CHECK(rs.eq_bits(0, 0) == Subset::full(rs.algebra.atom_count()));
  CHECK(rs.sig.relations.empty());

  CHECK_THROWS_AS(R(fixtures::sierpinski_presheaf()), PreconditionError);
}

TEST_CASE("adjunction on the fixtures") {
  const BVModel mnm = fixtures::mnm();
  const AdjunctionWitness w = adjunction_witness(mnm, L(mnm));
  CHECK_MESSAGE(w.triangle_r.pass, w.triangle_r.detail);
  CHECK_MESSAGE(w.triangle_l.pass, w.triangle_l.detail);
  CHECK(w.unit_morphism);
  CHECK(w.counit_natural);
  CHECK(w.unit_iso);
  CHECK(w.counit_iso);
  CHECK(w.pass());
  CHECK(w.unit.phi == std::vector<int>{0, 1});
}

TEST_CASE("adjunction on sampled models and presheaves") {
  std::mt19937_64 rng(sample::kDefaultSeed + 1);
  for (int i = 0; i < 30; ++i) {
    const BVModel m = sample::random_model(rng);
    const Presheaf f = sample::random_separated_presheaf(rng);
    const AdjunctionWitness w = adjunction_witness(m, f);
    CHECK_MESSAGE(w.pass(), (w.triangle_r.detail + " | " + w.triangle_l.detail));
    if (bvm::validate(m).extensional) CHECK(w.unit_iso);
    if (f.is_level_surjective_from_top()) CHECK(w.counit_iso);
    const Presheaf t = sample::top_image(f);
    CHECK(t.is_level_surjective_from_top());
    CHECK(adjunction_witness(m, t).counit_iso);
  }
}

TEST_CASE("mixing and the sheaf condition") {
  const MixingSheafReport r = mixing_iff_sheaf(fixtures::mnm());
  CHECK_FALSE(r.mixing.pass);
  CHECK_FALSE(r.sheaf.pass);
  CHECK_FALSE(r.sections_induced);
  CHECK(r.agree());
  CHECK(r.global_sections == 4);
  CHECK(r.stray_text.find("σ") != std::string::npos);
  CHECK(r.stray_text.find("τ") != std::string::npos);

  const bvm::BVModel p = bvm::product_model(
      {bvm::TarskiModel{{{{"E", 2}}, {}}, {"u", "v"}, {{"E", {false, true, false, false}}}, {}, {}},
       bvm::TarskiModel{{{{"E", 2}}, {}}, {"p", "q"}, {{"E", {true, false, false, false}}}, {}, {}}});
  const MixingSheafReport rp = mixing_iff_sheaf(p);
  CHECK(rp.mixing.pass);
  CHECK(rp.sheaf.pass);
  CHECK(rp.sections_induced);

  std::mt19937_64 rng(sample::kDefaultSeed + 2);
  for (int i = 0; i < 40; ++i) CHECK(mixing_iff_sheaf(sample::random_model(rng)).agree());
}

TEST_CASE("mixification") {
  const Mixification mx = mixify(fixtures::mnm());
  CHECK(mx.model.size() == 4);
  CHECK(mx.product_oracle);
  CHECK(bvm::validate(mx.model).valid);
  CHECK(bvm::has_mixing(mx.model).pass);
  CHECK(bvm::check_morphism(mx.embedding).embedding);
  CHECK(bvm::is_elementary(mx.embedding, 2).elementary);
  CHECK(mixing_iff_sheaf(mx.model).agree());
  // Equality is the join of the atoms where the components agree: each pair agrees on 0, 1 or 2 atoms.
  std::map<std::size_t, int> sizes;
  for (int s = 0; s < 4; ++s)
    for (int t = 0; t < 4; ++t) ++sizes[mx.model.eq_bits(s, t).size()];
  CHECK(sizes[2] == 4);
  CHECK(sizes[1] == 8);
  CHECK(sizes[0] == 4);

  // Mixing models are their own mixification, up to the extensional collapse.
  const Mixification again = mixify(mx.model);
  CHECK(again.model.size() == 4);

  // Over B2 there is a single stalk: the result is M/F₁.
  std::mt19937_64 rng(5);
  const BVModel b2 = sample::random_model(rng, 1, 4);
  CHECK(mixify(b2).model.size() == bvm::quotient_model(b2, balg::Filter(b2.algebra.top())).model.size());
}

TEST_CASE("the φ-bundle of R(x) on M_R") {
  const BVModel m = fixtures::m_r();
  const PhiBundle b = phi_bundle(m, logic::parse(m.sig, "R(x)"));
  CHECK(b.b_phi.is_top());
  CHECK(b.n_b == Subset::of({0, 1}));
  CHECK(b.a_phi == Subset::of({0, 1}));
  const auto secs = sheaf::gamma0(b.space, b.n_b);
  REQUIRE(secs.size() == 1);
  // G_{a1} ↦ [σ], G_{a2} ↦ [τ]
  CHECK(b.germ_classes[secs[0][0]] == std::vector<int>{0});
  CHECK(b.germ_classes[secs[0][1]] == std::vector<int>{1});
  const ClauseValues c = evaluate_clauses(m, b, false);
  CHECK(c.all_true());
  CHECK(c.agree());

  const PhiBundle none = phi_bundle(m, logic::parse(m.sig, "(R(x) & ~R(x))"));
  CHECK(none.b_phi.is_bottom());
  CHECK(none.n_b.empty());
  CHECK(none.a_phi.empty());
  CHECK(none.space.size() == 0);
  CHECK(evaluate_clauses(m, none, false).agree());

  CHECK_THROWS_AS(phi_bundle(m, logic::parse(m.sig, "E x. R(x)")), PreconditionError);
}

TEST_CASE("fullness via sections on sampled models") {
  CHECK(fullness_via_sections(fixtures::mnm(), 2).pass);
  CHECK(fullness_via_sections(fixtures::m_r(), 2).pass);
  std::mt19937_64 rng(sample::kDefaultSeed + 3);
  for (int i = 0; i < 15; ++i) {
    const auto r = fullness_via_sections(sample::random_model(rng), 2);
    CHECK_MESSAGE(r.pass, r.failure.value_or(""));
  }
}
