#pragma once

#include <map>
#include <set>

#include "hdrflow/curve.hpp"
#include "hdrflow/linalg.hpp"

namespace hdrflow {

// A cover of P^1 by complements of marked-point subsets. Chart k of the cover
// is P^1 minus the marked points listed in excluded[k] (indices in the
// curve's chart numbering: finite charts then infinity). Exactly one cover
// chart contains the point at infinity.
struct Cover {
    const MarkedProjLine* X = nullptr;
    std::vector<std::set<int>> excluded;

    static Cover atlas(const MarkedProjLine& X);
    // {P^1 - inf, P^1 - 0} with the canonical coordinate charts
    static Cover two_chart(const MarkedProjLine& X);

    int num_charts() const { return static_cast<int>(excluded.size()); }
    bool contains_curve_point(int cover_chart, int curve_chart_index) const {
        return excluded[cover_chart].count(curve_chart_index) == 0;
    }
    int infinity_chart() const;
    // some cover chart containing the given finite curve point
    int chart_containing(int curve_chart_index) const;
    // covers must agree on the curve; refinement means every chart of *this*
    // is contained in some chart of `coarser`
    bool refines(const Cover& coarser) const;
    bool operator==(const Cover& o) const;

    void validate() const;
};

// A 1-cochain/cocycle with values in a line bundle, on a cover. Component
// (i, j), i < j, is stored as its coefficient against the meromorphic
// section "1" of O(d [inf]) (frame-independent bookkeeping). A component
// must be regular away from the marked points excluded from both charts.
class CechClass {
  public:
    CechClass(const LineBundleF& bundle, Cover cover);

    static CechClass zero(const LineBundleF& bundle, const Cover& cover);
    // canonical representative of the class with given canonical coordinates
    // (coordinate k multiplies the basis class of t^{-(k+1)})
    static CechClass from_coords(const LineBundleF& bundle, const Cover& cover, const Vec& coords);
    // basis class of t^{-j}
    static CechClass basis_class(const LineBundleF& bundle, const Cover& cover, int j);

    const MarkedProjLine& curve() const { return bundle_.curve(); }
    const LineBundleF& bundle() const { return bundle_; }
    const Cover& cover() const { return cover_; }

    const RatFunc& component(int i, int j) const;
    void set_component(int i, int j, RatFunc value);

    bool is_cocycle() const;
    // canonical coordinates against the basis {t^{-j} : 1 <= j <= -d-1}
    Vec canonical_coords() const;
    bool is_zero_class() const { return vec_is_zero(canonical_coords()); }

    CechClass operator+(const CechClass& o) const;
    CechClass operator-(const CechClass& o) const;
    CechClass scale(const Fq& c) const;
    // componentwise multiplication by a morphism section: bundle -> target,
    // the morphism given by its coefficient against "1"-frames
    CechClass multiply_into(const LineBundleF& target, const RatFunc& morphism) const;
    // pullback along absolute Frobenius (sigma-semilinear on coordinates)
    CechClass frobenius_pullback() const;
    // same class on another cover (canonical representative there)
    CechClass refine_to(const Cover& target) const;

    // explicit 0-cochain f with delta f = this cochain ("1"-coefficients per
    // cover chart), empty when the class is nonzero
    std::optional<std::vector<RatFunc>> coboundary_witness() const;

  private:
    LineBundleF bundle_;
    Cover cover_;
    std::map<std::pair<int, int>, RatFunc> comp_;
};

// dim H^0(O(d)) = d + 1 for d >= 0; sections as polynomials of degree <= d
// (coefficients against the "1"-section)
std::vector<Poly> h0_basis(const LineBundleF& bundle);
int h0_dim(const LineBundleF& bundle);
// dim H^1(O(d)) = -d - 1 for d <= -2; canonical classes on the given cover
std::vector<CechClass> h1_basis(const LineBundleF& bundle, const Cover& cover);
int h1_dim(const LineBundleF& bundle);

// A line bundle with a log connection, the connection given per chart by
// nabla(e_a) = omega_a * e_a (x) w_a.
struct FlatLine {
    LineBundleF bundle;
    std::vector<RatFunc> omega;  // per chart, coefficient against w_chart

    static FlatLine canonical_connection(const LineBundleF& frobenius_pullback_bundle);
};

// nabla applied to a cochain of the underlying bundle, valued in bundle (x) omega_log
CechClass connection_on_cochain(const FlatLine& M, const CechClass& c);

// de Rham hypercohomology H^1 of the two-term complex [M -> M (x) omega_log],
// via the exact sequence 0 -> coker(H^0 nabla) -> H^1_dR -> ker(H^1 nabla) -> 0.
struct DeRhamH1 {
    int dim = 0;
    bool alpha_injective = false;      // iff H^0-level cokernel vanishes
    std::vector<Vec> image_of_alpha;   // basis, canonical H^1(M) coordinates
    int h0_coker_dim = 0;
};
DeRhamH1 hypercoh_h1_dR(const FlatLine& M);

}  // namespace hdrflow
