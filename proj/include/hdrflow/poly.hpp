#pragma once

#include <map>
#include <optional>
#include <vector>

#include "hdrflow/field.hpp"

namespace hdrflow {

// Dense univariate polynomial over F_q, normalized (no zero leading coeff).
class Poly {
  public:
    explicit Poly(const FqCtx& ctx) : ctx_(&ctx) {}
    Poly(const FqCtx& ctx, std::vector<Fq> coeffs);
    static Poly constant(const Fq& c);
    static Poly from_ints(const FqCtx& ctx, const std::vector<long>& coeffs);
    // t - a
    static Poly linear(const Fq& a);
    static Poly t(const FqCtx& ctx, int power = 1);

    const FqCtx& ctx() const { return *ctx_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    Fq coeff(int i) const;
    const std::vector<Fq>& coeffs() const { return c_; }
    Fq leading() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Fq& s) const;
    Poly operator-() const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // (quotient, remainder); divisor must be nonzero
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    // exact division; throws if remainder nonzero
    Poly divide_exact(const Poly& d) const;
    Poly pow(int e) const;
    Poly monic() const;
    Poly derivative() const;
    Fq eval(const Fq& x) const;
    // coefficients of this(t + a)  (Taylor rebase)
    Poly shift(const Fq& a) const;
    // coefficientwise sigma^e
    Poly frobenius_coeffs(int e = 1) const;
    // p-th power as a polynomial map: exponents spread, coefficients sigma'd
    Poly pth_power() const;
    // inverse of pth_power; throws when not a p-th power
    Poly pth_root() const;
    // multiplicity of root a
    int root_multiplicity(const Fq& a) const;

    std::string str(const std::string& var = "t") const;

  private:
    const FqCtx* ctx_;
    std::vector<Fq> c_;
    void trim();
};

// monic gcd; requires not both zero
Poly poly_gcd(const Poly& a, const Poly& b);

// Laurent polynomial: finite support map exponent -> coefficient, normalized.
class LaurentPoly {
  public:
    explicit LaurentPoly(const FqCtx& ctx) : ctx_(&ctx) {}
    static LaurentPoly term(const Fq& c, int exp);
    static LaurentPoly from_poly(const Poly& p, int shift = 0);

    const FqCtx& ctx() const { return *ctx_; }
    bool is_zero() const { return c_.empty(); }
    Fq coeff(int e) const;
    const std::map<int, Fq>& terms() const { return c_; }
    int min_exp() const;
    int max_exp() const;

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    bool operator==(const LaurentPoly& o) const;

    std::string str(const std::string& var = "t") const;

  private:
    const FqCtx* ctx_;
    std::map<int, Fq> c_;
    void set(int e, const Fq& v);
};

// Rational function num/den over F_q, gcd-reduced with monic denominator.
class RatFunc {
  public:
    explicit RatFunc(const FqCtx& ctx) : num_(ctx), den_(Poly::constant(Fq::one(ctx))) {}
    RatFunc(Poly num, Poly den);
    static RatFunc of(const Poly& p) { return RatFunc(p, Poly::constant(Fq::one(p.ctx()))); }
    static RatFunc constant(const Fq& c) { return of(Poly::constant(c)); }
    // t^e with e possibly negative
    static RatFunc t_power(const FqCtx& ctx, int e);

    const FqCtx& ctx() const { return num_.ctx(); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return den_.degree() == 0 && num_.degree() <= 0; }

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator*(const Fq& s) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc operator-() const;
    bool operator==(const RatFunc& o) const;
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    RatFunc derivative() const;
    RatFunc pth_power() const;
    RatFunc pth_root() const;  // throws if not a p-th power
    bool is_pth_power() const;
    RatFunc pow(int e) const;
    RatFunc inverse() const;

    // order of vanishing at finite a (negative = pole)
    int order_at(const Fq& a) const;
    // order of vanishing at infinity: deg den - deg num
    int order_at_infinity() const;
    bool regular_at(const Fq& a) const { return order_at(a) >= 0; }
    Fq eval(const Fq& a) const;                 // throws on pole
    Fq eval_at_infinity() const;                // throws on pole at infinity

    std::string str(const std::string& var = "t") const;

  private:
    Poly num_, den_;
    void reduce();
};

// Partial-fraction decomposition against a fixed list of (finite) pole points:
//   f = poly_part + sum_x sum_{j>=1} c[x][j] (t - x)^{-j}.
// Requires all poles of f to be among the given points.
struct PoleExpansion {
    Poly poly_part;
    // parallel to the input points: coefficients indexed by j-1
    std::vector<std::vector<Fq>> polar;
};
PoleExpansion partial_fractions(const RatFunc& f, const std::vector<Fq>& points);

// The polar part of f at a: sum_{j>=1} c_j (t-a)^{-j} as a RatFunc.
RatFunc polar_part_at(const RatFunc& f, const Fq& a);

// Coefficients of t^{-1}, t^{-2}, ..., t^{-n} in the expansion of f at
// infinity; requires f to vanish at infinity.
std::vector<Fq> expansion_at_infinity(const RatFunc& f, int n);

}  // namespace hdrflow
