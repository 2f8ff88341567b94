#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdrflow {

// Exact arithmetic in F_{p^m} for odd p, m <= 4. Elements are coefficient
// vectors against a fixed monic irreducible modulus chosen deterministically
// per (p, m): the lexicographically smallest primitive polynomial, so reported
// coordinates are reproducible across runs and machines.
class FqCtx {
  public:
    static constexpr int kMaxDeg = 4;

    FqCtx(int p, int m);

    // Process-wide cache; contexts are immutable so sharing is safe.
    static const FqCtx& get(int p, int m);

    int p() const { return p_; }
    int m() const { return m_; }
    long q() const { return q_; }

    // modulus coefficients c0..c_{m-1} of the monic modulus x^m + sum c_i x^i
    const std::array<int, kMaxDeg>& modulus() const { return mod_; }
    std::string modulus_string() const;

    // reduction of x^{m+k} for k = 0..m-2, as coefficient rows
    const std::array<int, kMaxDeg>& reduction_row(int k) const { return red_[k]; }
    // sigma(x^i) coefficient rows (sigma = absolute Frobenius a -> a^p)
    const std::array<int, kMaxDeg>& frobenius_row(int i) const { return frob_[i]; }

  private:
    int p_, m_;
    long q_;
    std::array<int, kMaxDeg> mod_{};
    std::array<std::array<int, kMaxDeg>, kMaxDeg> red_{};
    std::array<std::array<int, kMaxDeg>, kMaxDeg> frob_{};
};

class Fq {
  public:
    Fq() : ctx_(nullptr), c_{} {}
    Fq(const FqCtx& ctx, long value);

    static Fq zero(const FqCtx& ctx) { return Fq(ctx, 0); }
    static Fq one(const FqCtx& ctx) { return Fq(ctx, 1); }
    static Fq gen(const FqCtx& ctx);  // the class of x
    static Fq from_coeffs(const FqCtx& ctx, const std::vector<int>& coeffs);

    const FqCtx& ctx() const;
    bool valid() const { return ctx_ != nullptr; }
    bool is_zero() const;
    bool is_one() const;
    int coeff(int i) const { return c_[i]; }

    Fq operator+(const Fq& o) const;
    Fq operator-(const Fq& o) const;
    Fq operator*(const Fq& o) const;
    Fq operator/(const Fq& o) const;
    Fq operator-() const;
    Fq& operator+=(const Fq& o) { return *this = *this + o; }
    Fq& operator-=(const Fq& o) { return *this = *this - o; }
    Fq& operator*=(const Fq& o) { return *this = *this * o; }
    bool operator==(const Fq& o) const;
    bool operator!=(const Fq& o) const { return !(*this == o); }

    Fq inverse() const;
    Fq pow(long e) const;
    // sigma^e with sigma the absolute Frobenius a -> a^p
    Fq frobenius(int e = 1) const;
    // true iff fixed by sigma^d, i.e. lies in F_{p^d}
    bool in_subfield(int d) const;

    // value as integer when m == 1 (or the element is prime-rational)
    long as_int() const;
    bool is_prime_rational() const;

    // "c0+c1*x+..." with zero terms dropped ("0" for zero)
    std::string str() const;

    // total order for deterministic enumeration/normalization
    bool operator<(const Fq& o) const;

  private:
    const FqCtx* ctx_;
    std::array<int, FqCtx::kMaxDeg> c_;
};

// deterministic enumeration of all field elements, 0 first, in coeff order
std::vector<Fq> all_elements(const FqCtx& ctx);

// embed a prime-rational value into another context with the same p
Fq embed(const Fq& a, const FqCtx& target);

// Scalars of Z/p^2, the truncated Witt scalars used by the W2 atlas data.
// Only F_p-residue arithmetic is ever needed: all marked points are
// F_p-rational, so W2(F_{p^m}) never enters.
class W2Scalar {
  public:
    W2Scalar() : p_(0), v_(0) {}
    W2Scalar(int p, long value);

    int p() const { return p_; }
    long value() const { return v_; }

    W2Scalar operator+(const W2Scalar& o) const;
    W2Scalar operator-(const W2Scalar& o) const;
    W2Scalar operator*(const W2Scalar& o) const;
    W2Scalar operator-() const;
    bool operator==(const W2Scalar& o) const { return p_ == o.p_ && v_ == o.v_; }
    bool operator!=(const W2Scalar& o) const { return !(*this == o); }

    bool is_zero() const { return v_ == 0; }
    // reduction Z/p^2 -> F_p
    int reduce_mod_p() const { return static_cast<int>(v_ % p_); }
    // exact division of a multiple of p by p, landing in F_p; throws otherwise
    int divide_by_p() const;
    bool divisible_by_p() const { return v_ % p_ == 0; }

    std::string str() const { return std::to_string(v_); }

  private:
    int p_;
    long v_;  // canonical representative in [0, p^2)
};

bool is_prime(long n);

}  // namespace hdrflow
