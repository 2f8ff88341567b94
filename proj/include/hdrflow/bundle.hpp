#pragma once

#include <array>
#include <optional>

#include "hdrflow/cech.hpp"

namespace hdrflow {

struct BalancedSplittingError : std::runtime_error {
    BalancedSplittingError() : std::runtime_error("balanced splitting: caller must supply a filtration") {}
};
struct ChartIncompatibleError : std::runtime_error {
    explicit ChartIncompatibleError(const std::string& what) : std::runtime_error(what) {}
};

// 2x2 matrix of rational functions, row major.
struct Mat2R {
    std::array<std::array<RatFunc, 2>, 2> m;

    explicit Mat2R(const FqCtx& ctx)
        : m{{{RatFunc(ctx), RatFunc(ctx)}, {RatFunc(ctx), RatFunc(ctx)}}} {}
    static Mat2R identity(const FqCtx& ctx);
    static Mat2R diag(const RatFunc& x, const RatFunc& y);

    RatFunc& at(int r, int c) { return m[r][c]; }
    const RatFunc& at(int r, int c) const { return m[r][c]; }

    Mat2R operator*(const Mat2R& o) const;
    Mat2R operator+(const Mat2R& o) const;
    Mat2R operator-(const Mat2R& o) const;
    Mat2R scale(const RatFunc& s) const;
    std::array<RatFunc, 2> apply(const std::array<RatFunc, 2>& v) const;
    RatFunc det() const;
    RatFunc trace() const;
    Mat2R inverse() const;
    Mat2R pth_power_entries() const;
    Mat2R pth_root_entries() const;
    bool is_zero() const;
    bool operator==(const Mat2R& o) const;
};

// Rank-2 vector bundle presented by two component line-bundle profiles (their
// chart frames fix which coefficient pairs are regular) and transition
// matrices acting on coefficient pairs taken against the meromorphic section
// "1" of each component. For an extension of line bundles the transition is
// unipotent: (F, G)_a = (F_b + xi_ab G_b, G_b).
class RankTwoBundle {
  public:
    // extension of `quot` by `sub` with class cochain xi (Hom(quot,sub) values)
    static RankTwoBundle extension(const LineBundleF& sub, const LineBundleF& quot, const CechClass& xi);
    static RankTwoBundle direct_sum(const LineBundleF& a, const LineBundleF& b);
    // generic presentation (used for descended bundles): components fix the
    // regularity profile, transitions given directly
    static RankTwoBundle generic(const LineBundleF& c1, const LineBundleF& c2,
                                 std::map<std::pair<int, int>, Mat2R> t1);

    const MarkedProjLine& curve() const { return c1_.curve(); }
    const LineBundleF& component1() const { return c1_; }
    const LineBundleF& component2() const { return c2_; }
    int det_degree() const { return c1_.degree() + c2_.degree(); }

    bool is_extension() const { return ext_.has_value(); }
    const CechClass& extension_class_cochain() const;
    Vec extension_class() const;  // canonical coordinates
    const LineBundleF& sub() const { return c1_; }
    const LineBundleF& quot() const { return c2_; }

    // transition on "1"-coefficient pairs, any i != j
    Mat2R transition1(int i, int j) const;
    // transition between chart frames (the paper-facing matrices)
    Mat2R chart_transition(int i, int j) const;
    // twist by canonical O(n)
    RankTwoBundle twist(int n) const;

    bool transitions_are_cocycle() const;

  private:
    RankTwoBundle(LineBundleF c1, LineBundleF c2) : c1_(std::move(c1)), c2_(std::move(c2)) {}
    LineBundleF c1_, c2_;
    std::map<std::pair<int, int>, Mat2R> t1_;   // stored for i < j
    std::optional<CechClass> ext_;
};

// A section of H(twist): "1"-coefficient pair per atlas chart.
struct RankTwoSection {
    int twist = 0;
    std::vector<std::array<RatFunc, 2>> comp;  // per chart

    // value in chart frames at the chart's marked point, as the inclusion
    // O(-twist) -> H evaluated against the source canonical frame
    std::array<Fq, 2> value_at_chart_point(const RankTwoBundle& H, int chart) const;
};

int h0_of_rank2(const RankTwoBundle& H, int twist);
std::vector<RankTwoSection> h0_sections(const RankTwoBundle& H, int twist);

// splitting type (d1 >= d2) with d1 + d2 = deg det H
std::pair<int, int> splitting_type(const RankTwoBundle& H);
// the unique maximal-degree sub-line inclusion O(d1) -> H (deterministically
// normalized); throws BalancedSplittingError when d1 == d2
RankTwoSection max_sub_line(const RankTwoBundle& H);

// A homomorphism O(a) -> target line bundle, stored as the polynomial
// coefficient against "1"-frames; carries its zero divisor.
struct SectionHom {
    int src_deg = 0;
    int target_deg = 0;
    Poly coeff;
    int infinity_multiplicity() const { return target_deg - src_deg - coeff.degree(); }
    int divisor_degree() const { return target_deg - src_deg; }
};
// gcd degree of two divisors (common roots with multiplicity + infinity part)
int divisor_gcd_degree(const SectionHom& s1, const SectionHom& s2);

// Graded rank-2 Higgs bundle (O(up) (+) O(down), theta) with theta given by
// its polynomial coefficient O(up) -> O(down) (x) omega_log against "1"-frames.
struct GradedHiggs {
    const MarkedProjLine* X = nullptr;
    int up_deg = 0;
    int down_deg = 0;
    Poly theta;  // zero polynomial allowed

    GradedHiggs(const MarkedProjLine& X_, int up, int down, Poly th)
        : X(&X_), up_deg(up), down_deg(down), theta(std::move(th)) {
        if (!theta.is_zero() && theta.degree() > down - up + X_.r() - 2)
            throw std::invalid_argument("theta section degree out of range");
    }
    static GradedHiggs maximal(const MarkedProjLine& X, int up, int down);
    GradedHiggs twist(int n) const { return GradedHiggs(*X, up_deg + n, down_deg + n, theta); }
};

// General rank-2 Higgs bundle: bundle + per-chart theta matrices, recorded in
// chart frames against the chart log frame w_a.
struct HiggsBundle {
    RankTwoBundle E;
    std::vector<Mat2R> theta;

    bool theta_nilpotent() const;      // theta^2 = 0 chartwise
    bool theta_chart_compatible() const;
};
HiggsBundle to_higgs(const GradedHiggs& g);
// recognize a split-graded structure on a general Higgs bundle
GradedHiggs to_graded(const HiggsBundle& h);

// Rank-2 flat bundle: underlying bundle plus the connection matrices
// B_a = <lambda_a, Omega_a> in chart frames.
struct FlatBundle {
    RankTwoBundle H;
    std::vector<Mat2R> conn;

    // the connection operator on "1"-coefficient pairs: v -> lambda_a(v) + C1_a v
    Mat2R conn1(int chart) const;
    bool connection_chart_compatible() const;
};

// residue matrix at the marked point of `chart`, in chart frames
Mat residue(const FlatBundle& Hf, int chart);
// p-curvature matrices per chart, against chart frames and 1 (x) w_a;
// validates chart compatibility (throws ChartIncompatibleError)
std::vector<Mat2R> p_curvature(const FlatBundle& Hf);
// true iff psi vanishes nowhere on P^1
bool p_curvature_nowhere_zero(const FlatBundle& Hf);

struct GradeResult {
    GradedHiggs graded;
    bool filtration_flat = false;
};
// graded Higgs bundle of (Hf, Fil) with Fil the saturated sub-line given by
// an inclusion section; theta-bar = (nabla mod Fil)|_Fil
GradeResult grade(const FlatBundle& Hf, const RankTwoSection& fil);

// isomorphism of graded Higgs bundles: component degrees match and the theta
// sections agree up to a nonzero constant (diagonal automorphisms)
bool higgs_iso_test(const GradedHiggs& a, const GradedHiggs& b);

}  // namespace hdrflow
