#include "stonean/fixtures.hpp"

namespace stonean::fixtures {

balg::BoolAlg b2() { return balg::mk_powerset({"a1"}); }
balg::BoolAlg b4() { return balg::mk_powerset({"a1", "a2"}); }
balg::BoolAlg b8() { return balg::mk_powerset({"a1", "a2", "a3"}); }

topo::FinTop sierpinski() {
  return topo::FinTop::from_opens({"0", "1"}, {Subset{}, Subset::of({1}), Subset::of({0, 1})});
}

topo::FinPoset pv() { return topo::FinPoset({"p", "q", "r"}, {{1, 0}, {2, 0}}); }

bvm::BVModel mnm() { return bvm::BVModel::blank(b4(), {}, {"σ", "τ"}); }

bvm::BVModel m_r() {
  logic::Signature sig;
  sig.relations["R"] = 1;
  bvm::BVModel m = bvm::BVModel::blank(b4(), sig, {"σ", "τ"});
  m.rel["R"] = {Subset::of({0}), Subset::of({1})};
  return m;
}

sheaf::Presheaf sierpinski_presheaf() {
  const topo::FinTop s = sierpinski();
  // levels: {1}, S
  return sheaf::make_presheaf(s, {Subset::of({1}), Subset::of({0, 1})}, {{"t", "u"}, {"s"}},
                              [](int p, int q, int f) { return p == q ? f : 0; });
}

}  // namespace stonean::fixtures
