#include "doctest.h"
#include "hdrflow/poly.hpp"

#include <random>

using namespace hdrflow;

namespace {
Poly random_poly(const FqCtx& F, int deg, std::mt19937& rng) {
    std::vector<Fq> c;
    for (int i = 0; i <= deg; ++i) c.emplace_back(F, static_cast<long>(rng() % F.p()));
    return Poly(F, std::move(c));
}
}  // namespace

TEST_CASE("poly gcd: stated examples") {
    const FqCtx& F5 = FqCtx::get(5, 1);
    // (t^2 - 1, t - 1) over F_5 -> t - 1
    Poly a = Poly::from_ints(F5, {-1, 0, 1});
    Poly b = Poly::from_ints(F5, {-1, 1});
    CHECK(poly_gcd(a, b) == b.monic());
    // (t^p - t, t - a) -> t - a for every a in F_p
    Poly frob = Poly::t(F5, 5) - Poly::t(F5, 1);
    for (int av = 0; av < 5; ++av) {
        Poly lin = Poly::linear(Fq(F5, av));
        CHECK(poly_gcd(frob, lin) == lin);
    }
    CHECK_THROWS(poly_gcd(Poly(F5), Poly(F5)));
}

TEST_CASE("poly gcd agrees with brute-force root multiplicities over F_{p^2}") {
    const FqCtx& F9 = FqCtx::get(3, 2);
    std::mt19937 rng(123);
    for (int iter = 0; iter < 20; ++iter) {
        Poly a = random_poly(F9, 4, rng), b = random_poly(F9, 3, rng);
        if (a.is_zero() || b.is_zero()) continue;
        Poly g = poly_gcd(a, b);
        // every root of g over F_9 appears in both with at least g's multiplicity
        for (const auto& x : all_elements(F9)) {
            int mg = g.is_zero() ? 0 : g.root_multiplicity(x);
            if (mg > 0) {
                CHECK(a.root_multiplicity(x) >= mg);
                CHECK(b.root_multiplicity(x) >= mg);
                CHECK(std::min(a.root_multiplicity(x), b.root_multiplicity(x)) == mg);
            } else {
                CHECK((a.root_multiplicity(x) == 0 || b.root_multiplicity(x) == 0));
            }
        }
    }
}

TEST_CASE("poly shift and eval") {
    const FqCtx& F7 = FqCtx::get(7, 1);
    std::mt19937 rng(7);
    Poly f = random_poly(F7, 5, rng);
    Fq a(F7, 3), x(F7, 2);
    // f.shift(a)(x) = f(x + a)
    CHECK(f.shift(a).eval(x) == f.eval(x + a));
}

TEST_CASE("pth power and root") {
    const FqCtx& F25 = FqCtx::get(5, 2);
    std::mt19937 rng(99);
    Poly f = random_poly(F25, 4, rng);
    Poly g = f.pth_power();
    CHECK(g.pth_root() == f);
    // pth power evaluates as p-th power of values
    Fq x = Fq::from_coeffs(F25, {1, 2});
    CHECK(g.eval(x) == f.eval(x).pow(5));
    Poly bad = Poly::t(F25, 2);
    CHECK_THROWS(bad.pth_root());
}

TEST_CASE("laurent polynomial basics") {
    const FqCtx& F5 = FqCtx::get(5, 1);
    LaurentPoly a = LaurentPoly::term(Fq(F5, 2), -3) + LaurentPoly::term(Fq(F5, 1), 1);
    LaurentPoly b = LaurentPoly::term(Fq(F5, 3), 3);
    LaurentPoly c = a * b;
    CHECK(c.coeff(0).as_int() == 1);
    CHECK(c.coeff(4).as_int() == 3);
    CHECK(c.min_exp() == 0);
    CHECK(c.max_exp() == 4);
    CHECK((a - a).is_zero());
}

TEST_CASE("rational functions reduce and evaluate") {
    const FqCtx& F5 = FqCtx::get(5, 1);
    Poly t = Poly::t(F5);
    RatFunc f(t * t - Poly::constant(Fq::one(F5)), t - Poly::constant(Fq::one(F5)));
    // (t^2-1)/(t-1) = t+1
    CHECK(f == RatFunc::of(t + Poly::constant(Fq::one(F5))));
    RatFunc g = RatFunc::t_power(F5, -2);
    CHECK(g.order_at(Fq::zero(F5)) == -2);
    CHECK(g.order_at_infinity() == 2);
    CHECK(g.eval(Fq(F5, 2)).as_int() == 4);  // 1/4 = 4
}

TEST_CASE("partial fractions reconstruct the function") {
    const FqCtx& F7 = FqCtx::get(7, 1);
    std::mt19937 rng(2024);
    std::vector<Fq> pts = {Fq(F7, 0), Fq(F7, 1), Fq(F7, 3)};
    for (int iter = 0; iter < 12; ++iter) {
        Poly num = random_poly(F7, 4, rng);
        Poly den = Poly::constant(Fq::one(F7));
        den = den * Poly::linear(pts[0]).pow(1 + int(rng() % 3));
        den = den * Poly::linear(pts[1]).pow(int(rng() % 3));
        den = den * Poly::linear(pts[2]).pow(int(rng() % 2));
        RatFunc f(num, den);
        PoleExpansion pe = partial_fractions(f, pts);
        RatFunc back = RatFunc::of(pe.poly_part);
        for (size_t k = 0; k < pts.size(); ++k)
            for (size_t j = 0; j < pe.polar[k].size(); ++j)
                back = back +
                       RatFunc(Poly::constant(pe.polar[k][j]), Poly::linear(pts[k]).pow(static_cast<int>(j) + 1));
        CHECK(back == f);
    }
}

TEST_CASE("polar part and expansion at infinity") {
    const FqCtx& F3 = FqCtx::get(3, 1);
    Poly t = Poly::t(F3);
    // hand-checked: 1/(t^2(t-1)^2) = 1/t^2 + 2/t + 1/(t-1)^2 - 2/(t-1) over F_3
    RatFunc f(Poly::constant(Fq::one(F3)),
              Poly::t(F3, 2) * Poly::linear(Fq(F3, 1)).pow(2));
    RatFunc p0 = polar_part_at(f, Fq::zero(F3));
    CHECK(p0 == RatFunc::t_power(F3, -2) + RatFunc::t_power(F3, -1) * Fq(F3, 2));
    // sum of the two polar parts expands at infinity with x1 = 2, x2 = 1
    RatFunc p1 = polar_part_at(f, Fq(F3, 1));
    auto exp = expansion_at_infinity(p0 + p1, 2);
    CHECK(exp[0].as_int() == 0);  // total polar sum of an actual rational: f itself decays as t^-4
    // the class computation uses polar sums of cocycles; check a direct case
    RatFunc g = RatFunc(Poly::constant(Fq(F3, 2)), Poly::linear(Fq(F3, 1)));  // 2/(t-1)
    auto e2 = expansion_at_infinity(g, 3);
    CHECK(e2[0].as_int() == 2);
    CHECK(e2[1].as_int() == 2);
    CHECK(e2[2].as_int() == 2);
}
