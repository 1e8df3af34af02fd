#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "stonean/error.hpp"
#include "stonean/fixtures.hpp"
#include "stonean/topo.hpp"

using namespace stonean;
using namespace stonean::topo;

namespace {

// x ∈ Reg A iff some open U ∋ x has A ∩ U dense in U (closure taken in the subspace U).
Subset reg_by_density(const std::vector<Subset>& opens, int n, Subset a) {
  Subset out;
  for (int x = 0; x < n; ++x)
    for (Subset u : opens) {
      if (!u.contains(x)) continue;
      // dense in U: every nonempty open V ⊆ U meets A.
      bool dense = true;
      for (Subset v : opens)
        if (!v.empty() && v.subset_of(u) && !v.intersects(a)) dense = false;
      if (dense) {
        out = out.with(x);
        break;
      }
    }
  return out;
}

}  // namespace

TEST_CASE("from_opens validates the family") {
  CHECK_THROWS_AS(FinTop::from_opens({"0", "1"}, {Subset::of({1}), Subset::of({0, 1})}), InputError);  // no ∅
  CHECK_THROWS_AS(FinTop::from_opens({"0", "1", "2"}, {Subset{}, Subset::of({0}), Subset::of({1}), Subset::of({0, 1, 2})}),
                  InputError);  // {0,1} missing
  CHECK_THROWS_AS(FinTop::from_opens({}, {Subset{}}), InputError);
}

TEST_CASE("Sierpinski regularization and algebras") {
  const FinTop s = fixtures::sierpinski();
  CHECK(s.closure(Subset::of({1})) == Subset::of({0, 1}));
  CHECK(s.regularize(Subset::of({1})) == Subset::of({0, 1}));
  CHECK(s.regularize(Subset{}) == Subset{});
  CHECK(s.regularize(s.full()) == s.full());
  CHECK(s.regular_opens() == std::vector<Subset>{Subset{}, s.full()});
  CHECK(ro_algebra(s).algebra.atom_count() == 1);
  CHECK(clopens(s) == std::vector<Subset>{Subset{}, s.full()});
  CHECK(is_extremally_disconnected(s));
  CHECK(is_dense(s, Subset::of({1})));
  CHECK_FALSE(is_nowhere_dense(s, Subset::of({1})));
}

TEST_CASE("discrete spaces") {
  const FinTop d = FinTop::discrete({"x", "y"});
  CHECK(d.regularize(Subset::of({0})) == Subset::of({0}));
  CHECK(ro_algebra(d).algebra.element_count() == 4);
  CHECK(is_extremally_disconnected(d));
  CHECK(is_dense(d, d.full()));
  CHECK_FALSE(is_nowhere_dense(d, d.full()));
  CHECK_FALSE(is_dense(d, Subset::of({0})));
  CHECK_FALSE(is_nowhere_dense(d, Subset::of({0})));
}

TEST_CASE("CLOP against RO on a space that is not extremally disconnected") {
  const FinTop x = FinTop::generated({"0", "1", "2"}, {Subset::of({0}), Subset::of({1}), Subset::of({0, 1, 2})});
  // Opens: ∅, {0}, {1}, {0,1}, X. Regular: ∅, {0}, {1}, X. Clopen: ∅, X.
  CHECK(x.opens().size() == 5);
  CHECK(x.regular_opens().size() == 4);
  CHECK(clopens(x).size() == 2);
  CHECK_FALSE(is_extremally_disconnected(x));
  CHECK(clop_algebra(x).algebra.atom_count() == 1);
  CHECK(ro_algebra(x).algebra.atom_count() == 2);
}

TEST_CASE("down topologies") {
  const FinTop anti = down_topology(FinPoset({"a", "b"}, {}));
  CHECK(anti.opens().size() == 4);
  const FinTop chain = down_topology(FinPoset({"a", "b"}, {{0, 1}}));
  CHECK(chain.opens() == std::vector<Subset>{Subset{}, Subset::of({0}), Subset::of({0, 1})});
  const FinTop pv = down_topology(fixtures::pv());
  const auto pv_opens = pv.opens();
  std::set<Subset> got(pv_opens.begin(), pv_opens.end());
  // p=0, q=1, r=2
  std::set<Subset> want{Subset{}, Subset::of({1}), Subset::of({2}), Subset::of({1, 2}), Subset::of({0, 1, 2})};
  CHECK(got == want);
  CHECK_THROWS_AS(FinPoset({"a", "b"}, {{0, 1}, {1, 0}}), InputError);
}

TEST_CASE("boolean completion examples") {
  const Completion anti = boolean_completion(FinPoset({"a", "b"}, {}));
  CHECK(anti.ro.algebra.atom_count() == 2);
  CHECK(anti.ro.to_set(anti.e[0]) == Subset::of({0}));
  CHECK(anti.ro.to_set(anti.e[1]) == Subset::of({1}));

  const Completion pv = boolean_completion(fixtures::pv());
  CHECK(pv.ro.algebra.atom_count() == 2);
  CHECK(pv.e[0].is_top());
  CHECK(pv.ro.to_set(pv.e[1]) == Subset::of({1}));
  CHECK(pv.ro.to_set(pv.e[2]) == Subset::of({2}));
  CHECK(pv.order_preserving());
  CHECK(pv.incompatibility_preserving());
  CHECK(pv.dense());
}

TEST_CASE("completion of B4 minus zero is B4") {
  // B4⁺ = {a1, a2, 1} ordered by inclusion: the V shape again.
  const FinPoset p({"1", "a1", "a2"}, {{1, 0}, {2, 0}});
  const Completion c = boolean_completion(p);
  const balg::BoolAlg b4 = fixtures::b4();
  REQUIRE(c.ro.algebra.atom_count() == 2);
  // a1 ↦ e(a1), a2 ↦ e(a2) extends to an isomorphism sending 1 to e(1).
  const Subset ea1 = c.e[1].bits(), ea2 = c.e[2].bits();
  CHECK(ea1.size() == 1);
  CHECK(ea2.size() == 1);
  CHECK((ea1 & ea2).empty());
  CHECK(c.e[0].is_top());
}

TEST_CASE("enumerations match the known counts") {
  const std::vector<std::size_t> tops{1, 4, 29, 355}, posets{1, 3, 19, 219};
  for (int n = 1; n <= 4; ++n) {
    const auto ts = all_topologies(n);
    CHECK(ts.size() == tops[n - 1]);
    std::set<std::vector<Subset>> distinct;
    for (const auto& t : ts) distinct.insert(t.opens());
    CHECK(distinct.size() == ts.size());
    CHECK(all_posets(n).size() == posets[n - 1]);
  }
}

TEST_CASE("interior, closure and Reg against the open-set definitions") {
  for (int n = 1; n <= 3; ++n)
    for (const FinTop& x : all_topologies(n)) {
      const auto opens = x.opens();
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
        const Subset A(a);
        CHECK(x.interior(A) == oracle::interior(opens, A));
        CHECK(x.closure(A) == oracle::closure(opens, n, A));
        CHECK(x.regularize(A) == oracle::reg(opens, n, A));
        CHECK(x.regularize(A) == reg_by_density(opens, n, A));
        CHECK(x.regularize(A) == x.regularize_by_density(A));
        CHECK(x.regularize(x.regularize(A)) == x.regularize(A));
        if (x.is_open(A)) CHECK(A.subset_of(x.regularize(A)));
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
          if (A.subset_of(Subset(b))) CHECK(x.regularize(A).subset_of(x.regularize(Subset(b))));
      }
    }
}

TEST_CASE("RO algebra laws on all small spaces") {
  for (int n = 1; n <= 3; ++n)
    for (const FinTop& x : all_topologies(n)) {
      const ROAlgebra ro = ro_algebra(x);
      CHECK(check_ro_laws(ro).empty());
      CHECK(ro.algebra.element_count() == x.regular_opens().size());
      CHECK(is_extremally_disconnected(x) == (clopens(x) == x.regular_opens()));
    }
}

TEST_CASE("completions of all small posets") {
  for (int n = 1; n <= 4; ++n)
    for (const FinPoset& p : all_posets(n)) {
      const Completion c = boolean_completion(p);
      CHECK(c.order_preserving());
      CHECK(c.incompatibility_preserving());
      CHECK(c.dense());
    }
}

TEST_CASE("induced homomorphisms") {
  const FinTop s = fixtures::sierpinski();
  const InducedHom id = induced_ro_hom(ContMap{s, s, {0, 1}});
  CHECK(id.hom == balg::BAHom::identity(id.ro_source.algebra));

  const FinTop d = FinTop::discrete({"x", "y"}), one = FinTop::discrete({"*"});
  const InducedHom c = induced_ro_hom(ContMap{d, one, {0, 0}});
  CHECK(c.ro_source.to_set(c.hom(c.ro_target.algebra.top())) == d.full());

  const InducedHom sw = induced_ro_hom(ContMap{d, d, {1, 0}});
  // k̄_f({x}) = f⁻¹[{x}] = {y}
  CHECK(sw.ro_source.to_set(sw.hom(sw.ro_target.elem(Subset::of({0})))) == Subset::of({1}));
  CHECK_FALSE(sw.preimage_identity_failure());
  CHECK_FALSE(sw.adjoint_mismatch());
}

TEST_CASE("non-open and non-continuous maps are rejected") {
  const FinTop s = fixtures::sierpinski(), d = FinTop::discrete({"x", "y"});
  // Identity from discrete onto Sierpiński is continuous but not open.
  try {
    induced_ro_hom(ContMap{d, s, {0, 1}});
    FAIL("expected rejection");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("not open") != std::string::npos);
  }
  CHECK_THROWS_AS(induced_ro_hom(ContMap{s, d, {0, 1}}), PreconditionError);
}

TEST_CASE("open continuous maps commute Reg with preimages") {
  bool counterexample = false;
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m)
      for (const FinTop& x : all_topologies(n))
        for (const FinTop& y : all_topologies(m)) {
          std::vector<int> fn(n, 0);
          while (true) {
            ContMap f{x, y, fn};
            if (f.continuous()) {
              const auto fail = preimage_identity_failure(f);
              if (f.open_map()) {
                CHECK_FALSE(fail);
                const InducedHom h = induced_ro_hom(f);
                CHECK_FALSE(h.adjoint_mismatch());
              } else if (fail) {
                counterexample = true;
              }
            }
            int p = n - 1;
            while (p >= 0 && ++fn[p] == m) fn[p--] = 0;
            if (p < 0) break;
          }
        }
  CHECK(counterexample);
}

TEST_CASE("dense coverings") {
  const FinTop s = fixtures::sierpinski();
  CHECK(is_dense_covering(s, {Subset::of({1})}, s.full()));
  const FinTop d = FinTop::discrete({"x", "y"});
  CHECK_FALSE(is_dense_covering(d, {Subset::of({0})}, d.full()));
  CHECK(is_dense_covering(d, {Subset::of({0}), Subset::of({1})}, d.full()));
}

TEST_CASE("stone space of RO and RO of stone space") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::string> pts;
    for (int i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
    const FinTop d = FinTop::discrete(pts);
    const auto st = balg::stone_space(ro_algebra(d).algebra);
    CHECK(st.space.size() == n);
    CHECK(st.space.is_discrete());
    const ROAlgebra back = ro_algebra(st.space);
    CHECK(back.algebra.atom_count() == n);
  }
}
