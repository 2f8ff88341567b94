#pragma once

#include "hdrflow/bundle.hpp"

namespace hdrflow {

// A choice of W2-lifting of the marked curve: the marked points 0, 1, inf are
// pinned by the Mobius normalization; every further finite marked point a is
// lifted to [a] + p eps_a. For extension-scalar searches eps may live in
// F_{p^m}; such choices act through the affine structure of the lifting space
// rather than through literal Witt scalars.
struct W2LiftChoice {
    std::vector<Fq> eps;  // one entry per finite marked point; first two zero

    static W2LiftChoice standard(const MarkedProjLine& X);
    static W2LiftChoice from_eps(const MarkedProjLine& X, const std::vector<Fq>& free_eps);
    void validate(const MarkedProjLine& X) const;
};

// The per-chart log Frobenius lifting atlas over W2: on the chart of a finite
// marked point a, F_a(t) = a~ + (t - a~)^p with a~ = [a] + p eps_a; on the
// infinity chart F(s) = s^p. The chart pair data
//   H_ab = (F_a^* - F_b^*)/p applied to t
// is the obstruction cocycle in F*T_log coordinates.
class FrobLiftAtlas {
  public:
    FrobLiftAtlas(const MarkedProjLine& X, W2LiftChoice choice);

    const MarkedProjLine& curve() const { return *X_; }
    const W2LiftChoice& choice() const { return choice_; }

    // H_{ij}(t) for charts i < j (derivation value on t, an F_p[t]-polynomial
    // plus the eps-linear constant)
    Poly h_poly(int i, int j) const;
    // the lifted point of a finite chart as a W2 scalar (prime-rational eps only)
    W2Scalar lift_value(int chart) const;
    // coefficients of F_chart(t) over W2 (prime-rational eps only)
    std::vector<W2Scalar> lift_polynomial(int chart) const;

  private:
    const MarkedProjLine* X_;
    W2LiftChoice choice_;
    // g_{a,b} and g_{a,inf} tails, independent of eps
    std::map<std::pair<int, int>, Poly> g_;
};

FrobLiftAtlas build_atlas(const MarkedProjLine& X, const W2LiftChoice& choice);

// the obstruction-difference class of two atlases in H^1(F*T_log); equals the
// Frobenius pullback of the Kodaira-Spencer difference class of the liftings
CechClass obstruction_class(const FrobLiftAtlas& a, const FrobLiftAtlas& b);

// inverse Cartier transform of a nilpotent rank-2 Higgs bundle: chartwise
// nabla = nabla_can + zeta(F* theta), glued by 1 - h (x) F*theta
FlatBundle inverse_cartier(const HiggsBundle& E, const FrobLiftAtlas& atlas);
FlatBundle inverse_cartier(const GradedHiggs& E, const FrobLiftAtlas& atlas);

// Cartier transform of a flat bundle with nilpotent p-curvature and nilpotent
// residues: kernel-sheaf descent of nabla' = nabla + zeta(psi)
HiggsBundle cartier(const FlatBundle& Hf, const FrobLiftAtlas& atlas);

// residue identity: Res((id (x) zeta) psi) = -Res(nabla) at every marked point
bool claim62_check(const FlatBundle& Hf);

// the Higgs bundle (O (+) omega_log, theta_a) in the natural frames of the
// three-pointed line discussions: theta multiplies by the scalar a
HiggsBundle omega_twisted_higgs(const MarkedProjLine& X, const Fq& a);

}  // namespace hdrflow
