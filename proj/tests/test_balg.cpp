#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "stonean/balg.hpp"
#include "stonean/error.hpp"
#include "stonean/fixtures.hpp"

using namespace stonean;
using namespace stonean::balg;

namespace {

// Every atom map from target atoms to source atoms.
std::vector<std::vector<int>> all_atom_maps(int source_atoms, int target_atoms) {
  std::vector<std::vector<int>> out;
  std::vector<int> m(target_atoms, 0);
  while (true) {
    out.push_back(m);
    int p = target_atoms - 1;
    while (p >= 0 && ++m[p] == source_atoms) m[p--] = 0;
    if (p < 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("mk_powerset sizes and label errors") {
  CHECK(mk_powerset({"a1"}).element_count() == 2);
  CHECK(mk_powerset({"a1", "a2"}).element_count() == 4);
  CHECK(mk_powerset({"a1", "a2", "a3"}).element_count() == 8);
  CHECK_THROWS_AS(mk_powerset({}), InputError);
  CHECK_THROWS_AS(mk_powerset({"a", "a"}), InputError);
  CHECK(fixtures::b8().check_axioms().empty());
}

TEST_CASE("element syntax and formatting") {
  const BoolAlg b = fixtures::b4();
  CHECK(b.parse("a1∨a2") == b.top());
  CHECK(b.parse("a1,a2") == b.top());
  CHECK(b.parse("a2|a1") == b.top());
  CHECK(b.parse("0").is_bottom());
  CHECK(b.parse("1").is_top());
  CHECK(b.parse("a1").str() == "a1");
  CHECK(b.top().str() == "a1∨a2 = 1");
  CHECK(b.bottom().str() == "0");
  CHECK_THROWS_AS(b.parse("a7"), InputError);
  CHECK(b.parse("a2∨a1").atom_labels() == std::vector<std::string>{"a1", "a2"});
}

TEST_CASE("mixing algebras is an error") {
  const Elem x = fixtures::b4().atom(0), y = fixtures::b8().atom(0);
  CHECK_THROWS_AS((void)(x == y), AlgebraMismatch);
  CHECK_THROWS_AS((void)(x & y), AlgebraMismatch);
  CHECK_THROWS_AS((void)x.leq(y), AlgebraMismatch);
}

TEST_CASE("atoms are join-prime") {
  const BoolAlg b = fixtures::b8();
  for (int a = 0; a < 3; ++a)
    for (const Elem& x : b.elements())
      for (const Elem& y : b.elements())
        if (b.atom(a).leq(x | y)) CHECK((b.atom(a).leq(x) || b.atom(a).leq(y)));
}

TEST_CASE("ultrafilters agree with the brute-force family search") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i + 1));
    const BoolAlg b = mk_powerset(labels);
    const auto brute = oracle::ultrafilters(n);
    const auto uf = ultrafilters(b);
    REQUIRE(uf.size() == brute.size());
    std::set<std::uint64_t> got;
    for (const Filter& g : uf) {
      CHECK(g.is_ultra());
      std::uint64_t fam = 0;
      for (const Elem& e : b.elements())
        if (g.contains(e)) fam |= std::uint64_t{1} << e.bits().bits();
      got.insert(fam);
    }
    CHECK(got == std::set<std::uint64_t>(brute.begin(), brute.end()));
  }
  CHECK(ultrafilters(fixtures::b2())[0].str() == "F_{a1}");
  const auto u4 = ultrafilters(fixtures::b4());
  CHECK(u4[0].str() == "F_{a1}");
  CHECK(u4[1].str() == "F_{a2}");
}

TEST_CASE("stone space examples") {
  const StoneSpace s2 = stone_space(fixtures::b2());
  CHECK(s2.space.size() == 1);
  CHECK(s2.clopen(fixtures::b2().top()) == s2.space.full());

  const StoneSpace s4 = stone_space(fixtures::b4());
  CHECK(s4.space.size() == 2);
  CHECK(s4.space.is_discrete());
  CHECK(s4.clopen(fixtures::b4().atom(0)) == Subset::of({0}));
  CHECK(s4.space.point(0) == "G_a1");

  const BoolAlg b8 = fixtures::b8();
  const StoneSpace s8 = stone_space(b8);
  CHECK(s8.space.opens().size() == 8);
  // b ↦ N_b is a bijective homomorphism: check against the ultrafilter definition.
  std::set<Subset> images;
  for (const Elem& x : b8.elements()) {
    Subset n;
    const auto uf = ultrafilters(b8);
    for (std::size_t g = 0; g < uf.size(); ++g)
      if (uf[g].contains(x)) n = n.with(static_cast<int>(g));
    CHECK(s8.clopen(x) == n);
    CHECK(s8.from_clopen(n) == x);
    images.insert(n);
    for (const Elem& y : b8.elements()) {
      CHECK(s8.clopen(x & y) == (s8.clopen(x) & s8.clopen(y)));
      CHECK(s8.clopen(x | y) == (s8.clopen(x) | s8.clopen(y)));
    }
    CHECK(s8.clopen(~x) == s8.clopen(x).complement(3));
  }
  CHECK(images.size() == 8);
}

TEST_CASE("quotients") {
  const BoolAlg b4 = fixtures::b4();
  Quotient q1 = quotient(Filter(b4.top()));
  CHECK(q1.algebra.atom_count() == 2);
  for (const Elem& x : b4.elements()) CHECK(q1.proj(x).bits() == x.bits());

  Quotient qa = quotient(Filter(b4.atom(0)));
  CHECK(qa.algebra.atom_count() == 1);
  CHECK(qa.algebra.label(0) == "a1");
  CHECK(qa.proj(b4.atom(1)).is_bottom());
  CHECK(qa.proj.surjective());

  const BoolAlg b8 = fixtures::b8();
  Quotient q = quotient(Filter(b8.parse("a1∨a2")));
  CHECK(q.algebra.labels() == std::vector<std::string>{"a1", "a2"});
  // Homomorphism laws for the projection, and its kernel filter is F.
  for (const Elem& x : b8.elements()) {
    for (const Elem& y : b8.elements()) {
      CHECK(q.proj(x & y) == (q.proj(x) & q.proj(y)));
      CHECK(q.proj(x | y) == (q.proj(x) | q.proj(y)));
    }
    CHECK(q.proj(~x) == ~q.proj(x));
    CHECK(q.proj(x).is_top() == b8.parse("a1∨a2").leq(x));
  }
}

TEST_CASE("left adjoint examples") {
  const BoolAlg b2 = fixtures::b2(), b4 = fixtures::b4(), b8 = fixtures::b8();
  BAHom i(b2, b4, {0, 0});
  CHECK(i.left_adjoint(b4.atom(0)).is_top());
  CHECK(i.left_adjoint(b4.bottom()).is_bottom());

  BAHom id = BAHom::identity(b4);
  for (const Elem& c : b4.elements()) CHECK(id.left_adjoint(c) == c);

  BAHom j(b4, b8, {0, 0, 1});
  CHECK(j.left_adjoint(b8.parse("a1∨a2")) == b4.atom(0));
  CHECK(j.left_adjoint(b8.atom(2)) == b4.atom(1));
}

TEST_CASE("left adjoints satisfy the Galois condition and match the infimum search") {
  const std::vector<BoolAlg> algs{fixtures::b2(), fixtures::b4(), fixtures::b8()};
  for (const BoolAlg& s : algs)
    for (const BoolAlg& t : algs)
      for (const auto& map : all_atom_maps(s.atom_count(), t.atom_count())) {
        BAHom i(s, t, map);
        for (const Elem& c : t.elements()) {
          CHECK(i.left_adjoint(c).bits() == oracle::left_adjoint(map, s.atom_count(), c.bits()));
          for (const Elem& b : s.elements()) CHECK(c.leq(i(b)) == i.left_adjoint(c).leq(b));
        }
      }
}

TEST_CASE("every unital homomorphism comes from one atom map") {
  const BoolAlg b4 = fixtures::b4(), b8 = fixtures::b8();
  // All functions B4 -> B8 fixing 0 and 1: 8^2 choices for the atoms' images, the rest forced or checked.
  int homs = 0;
  for (std::uint64_t x = 0; x < 8; ++x)
    for (std::uint64_t y = 0; y < 8; ++y) {
      std::vector<Subset> table{Subset{}, Subset(x), Subset(y), Subset(x | y)};
      bool is_hom = (x & y) == 0 && (x | y) == 7;
      if (is_hom) {
        ++homs;
        BAHom h = BAHom::from_function(b4, b8, table);
        for (std::uint64_t e = 0; e < 4; ++e) CHECK(h.apply(Subset(e)) == table[e]);
      } else {
        CHECK_THROWS(BAHom::from_function(b4, b8, table));
      }
    }
  CHECK(homs == 8);  // 2^3 atom maps
}

TEST_CASE("dual map") {
  const BoolAlg b2 = fixtures::b2(), b4 = fixtures::b4(), b8 = fixtures::b8();
  CHECK(dual_map(BAHom::identity(b4)) == std::vector<int>{0, 1});
  BAHom j(b4, b8, {0, 0, 1});
  CHECK(dual_map(j)[1] == 0);
  BAHom i(b2, b4, {0, 0});
  CHECK(i.injective());
  CHECK(dual_map(i) == std::vector<int>{0, 0});

  // i⁻¹[G] by brute force, and i = k_{π*_i}.
  for (const auto& map : all_atom_maps(3, 3)) {
    BAHom h(b8, b8, map);
    const auto d = dual_map(h);
    for (int g = 0; g < 3; ++g) {
      std::vector<std::uint64_t> pre;
      for (std::uint64_t b = 0; b < 8; ++b)
        if (oracle::hom_apply(map, Subset(b)).contains(g)) pre.push_back(b);
      // The preimage is the principal filter of the atom d[g].
      for (std::uint64_t b = 0; b < 8; ++b)
        CHECK((std::find(pre.begin(), pre.end(), b) != pre.end()) == Subset(b).contains(d[g]));
    }
    CHECK(hom_from_dual(b8, b8, d) == h);
    std::set<int> image(d.begin(), d.end());
    CHECK(h.injective() == (image.size() == 3));
  }
}
