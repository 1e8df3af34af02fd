#pragma once

#include "stonean/balg.hpp"
#include "stonean/bvm.hpp"
#include "stonean/fintop.hpp"
#include "stonean/sheaf.hpp"

/// Small named instances used by the CLI registry and the tests.
namespace stonean::fixtures {

balg::BoolAlg b2();  // atom a1
balg::BoolAlg b4();  // atoms a1, a2
balg::BoolAlg b8();  // atoms a1, a2, a3

/// Points 0, 1 with opens ∅, {1}, {0,1}.
topo::FinTop sierpinski();
/// p, q, r with q < p and r < p.
topo::FinPoset pv();

/// B4, domain {σ, τ}, ⟦σ=τ⟧ = 0, no relations. Valid, extensional, not mixing.
bvm::BVModel mnm();
/// MNM plus a unary R with ⟦R(σ)⟧ = a1, ⟦R(τ)⟧ = a2.
bvm::BVModel m_r();

/// On the Sierpiński space: F(S) = {s}, F({1}) = {t, u}, s↾{1} = t.
sheaf::Presheaf sierpinski_presheaf();

}  // namespace stonean::fixtures
