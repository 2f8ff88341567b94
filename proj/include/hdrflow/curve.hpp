#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hdrflow/poly.hpp"

namespace hdrflow {

// A marked point of P^1: a value in F_p or the point at infinity.
struct MarkedPoint {
    bool at_infinity = false;
    int value = 0;  // representative in [0, p) when finite

    std::string str() const { return at_infinity ? "inf" : std::to_string(value); }
    bool operator==(const MarkedPoint& o) const {
        return at_infinity == o.at_infinity && (at_infinity || value == o.value);
    }
};

// The log curve (P^1, D) over F_{p^m} with D a list of r >= 3 distinct marked
// points in F_p u {inf}, normalized so the list starts 0, 1, inf. Charts are
// indexed with the finite marked points first (in marked order) and the
// infinity chart last; chart k is P^1 minus all marked points but its own.
class MarkedProjLine {
  public:
    MarkedProjLine(const FqCtx& ctx, std::vector<MarkedPoint> marked);

    static MarkedProjLine rational(const FqCtx& ctx, const std::vector<std::string>& names);

    const FqCtx& ctx() const { return *ctx_; }
    int p() const { return ctx_->p(); }
    int r() const { return static_cast<int>(marked_.size()); }
    const std::vector<MarkedPoint>& marked() const { return marked_; }

    int num_charts() const { return r(); }
    int infinity_chart() const { return r() - 1; }
    bool chart_is_finite(int chart) const { return chart != infinity_chart(); }
    // the finite marked point owned by a finite chart
    Fq chart_point(int chart) const;
    // charts in order: finite marked values then infinity
    const std::vector<Fq>& finite_points() const { return finite_; }

    int chart_of_marked(int marked_index) const;
    int marked_of_chart(int chart) const;

    // prod over finite marked b of (t - b)
    const Poly& vanishing_poly() const { return van_; }
    // vanishing_poly / (t - own point)
    Poly vanishing_except(int chart) const;

    // lambda_chart = ell * d/dt with ell = (t - a) on finite charts, -t at inf
    RatFunc log_vector_factor(int chart) const;

    // same curve data over another field extension (same p)
    MarkedProjLine base_change(const FqCtx& target) const;

    std::string str() const;

  private:
    const FqCtx* ctx_;
    std::vector<MarkedPoint> marked_;
    std::vector<Fq> finite_;
    Poly van_;
};

// A line bundle on the marked curve presented by a chart frame for each
// atlas chart. Frames are recorded as meromorphic multiples of the fixed
// rational section "1" of O(d * [inf]); a frame is a unit on its chart.
// The canonical frames are 1 on finite charts and t^d at infinity.
class LineBundleF {
  public:
    LineBundleF(const MarkedProjLine& X, int degree, std::vector<RatFunc> frames);
    static LineBundleF canonical(const MarkedProjLine& X, int degree);

    const MarkedProjLine& curve() const { return *X_; }
    int degree() const { return deg_; }
    const RatFunc& frame(int chart) const { return frames_[chart]; }
    // e_b = transition(a, b) * e_a on overlaps
    RatFunc transition(int a, int b) const { return frames_[b] / frames_[a]; }

    LineBundleF tensor(const LineBundleF& o) const;
    LineBundleF dual() const;
    LineBundleF power(int n) const;
    // pullback along absolute Frobenius; frames 1 (x) e
    LineBundleF frobenius_pullback() const;
    // tensor with canonical O(n)
    LineBundleF twist(int n) const;

    bool frames_valid() const;
    bool same_frames(const LineBundleF& o) const;

  private:
    const MarkedProjLine* X_;
    int deg_;
    std::vector<RatFunc> frames_;
};

// omega_log with chart frames w_a = dlog(t - a), w_inf = dlog(s) = -dlog t.
// Against the meromorphic frame eta = dt / prod(t - b), the factors are
// prod_{b != a}(t - b) and -prod(t - b)/t.
LineBundleF omega_log(const MarkedProjLine& X);
// the dual T_log with frames (t - a) d/dt and s d/ds = -t d/dt
LineBundleF tangent_log(const MarkedProjLine& X);

// residue at the marked point of `chart` of the log form (coeff * w_chart)
Fq residue_at(const MarkedProjLine& X, int chart, const RatFunc& coeff_vs_w);

}  // namespace hdrflow
