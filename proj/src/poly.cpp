#include "hdrflow/poly.hpp"

#include <algorithm>
#include <sstream>

namespace hdrflow {

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly::Poly(const FqCtx& ctx, std::vector<Fq> coeffs) : ctx_(&ctx), c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Fq& c) { return Poly(c.ctx(), {c}); }

Poly Poly::from_ints(const FqCtx& ctx, const std::vector<long>& coeffs) {
    std::vector<Fq> v;
    v.reserve(coeffs.size());
    for (long c : coeffs) v.emplace_back(ctx, c);
    return Poly(ctx, std::move(v));
}

Poly Poly::linear(const Fq& a) { return Poly(a.ctx(), {-a, Fq::one(a.ctx())}); }

Poly Poly::t(const FqCtx& ctx, int power) {
    std::vector<Fq> v(size_t(power) + 1, Fq::zero(ctx));
    v[power] = Fq::one(ctx);
    return Poly(ctx, std::move(v));
}

Fq Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return Fq::zero(*ctx_);
    return c_[i];
}

Fq Poly::leading() const {
    if (is_zero()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Fq> v(std::max(c_.size(), o.c_.size()), Fq::zero(*ctx_));
    for (size_t i = 0; i < c_.size(); ++i) v[i] = v[i] + c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) v[i] = v[i] + o.c_[i];
    return Poly(*ctx_, std::move(v));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    std::vector<Fq> v(c_);
    for (auto& x : v) x = -x;
    return Poly(*ctx_, std::move(v));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(*ctx_);
    std::vector<Fq> v(c_.size() + o.c_.size() - 1, Fq::zero(*ctx_));
    for (size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero())
            for (size_t j = 0; j < o.c_.size(); ++j) v[i + j] = v[i + j] + c_[i] * o.c_[j];
    return Poly(*ctx_, std::move(v));
}

Poly Poly::operator*(const Fq& s) const {
    std::vector<Fq> v(c_);
    for (auto& x : v) x = x * s;
    return Poly(*ctx_, std::move(v));
}

bool Poly::operator==(const Poly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly r = *this;
    std::vector<Fq> q(std::max<int>(0, degree() - d.degree() + 1), Fq::zero(*ctx_));
    Fq lead_inv = d.leading().inverse();
    while (!r.is_zero() && r.degree() >= d.degree()) {
        int k = r.degree() - d.degree();
        Fq c = r.leading() * lead_inv;
        q[k] = c;
        std::vector<Fq> sub(size_t(k) + d.c_.size(), Fq::zero(*ctx_));
        for (size_t i = 0; i < d.c_.size(); ++i) sub[k + i] = d.c_[i] * c;
        r = r - Poly(*ctx_, std::move(sub));
    }
    return {Poly(*ctx_, std::move(q)), r};
}

Poly Poly::divide_exact(const Poly& d) const {
    auto [q, r] = divmod(d);
    if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
    return q;
}

Poly Poly::pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative polynomial power");
    Poly r = Poly::constant(Fq::one(*ctx_)), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return *this * leading().inverse();
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly(*ctx_);
    std::vector<Fq> v(c_.size() - 1, Fq::zero(*ctx_));
    for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Fq(*ctx_, static_cast<long>(i));
    return Poly(*ctx_, std::move(v));
}

Fq Poly::eval(const Fq& x) const {
    Fq r = Fq::zero(*ctx_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
}

Poly Poly::shift(const Fq& a) const {
    Poly r(*ctx_);
    Poly lin(*ctx_, {a, Fq::one(*ctx_)});  // t + a
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * lin + Poly::constant(*it);
    return r;
}

Poly Poly::frobenius_coeffs(int e) const {
    std::vector<Fq> v(c_);
    for (auto& x : v) x = x.frobenius(e);
    return Poly(*ctx_, std::move(v));
}

Poly Poly::pth_power() const {
    if (is_zero()) return *this;
    int p = ctx_->p();
    std::vector<Fq> v(size_t(degree()) * p + 1, Fq::zero(*ctx_));
    for (size_t i = 0; i < c_.size(); ++i) v[i * p] = c_[i].frobenius();
    return Poly(*ctx_, std::move(v));
}

Poly Poly::pth_root() const {
    if (is_zero()) return *this;
    int p = ctx_->p();
    if (degree() % p != 0) throw std::domain_error("polynomial is not a p-th power");
    std::vector<Fq> v(size_t(degree() / p) + 1, Fq::zero(*ctx_));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i % p != 0) {
            if (!c_[i].is_zero()) throw std::domain_error("polynomial is not a p-th power");
        } else {
            v[i / p] = c_[i].frobenius(ctx_->m() - 1);  // sigma^{-1}
        }
    }
    return Poly(*ctx_, std::move(v));
}

int Poly::root_multiplicity(const Fq& a) const {
    if (is_zero()) throw std::domain_error("root multiplicity in zero polynomial");
    Poly lin = Poly::linear(a);
    Poly r = *this;
    int m = 0;
    while (true) {
        auto [q, rem] = r.divmod(lin);
        if (!rem.is_zero()) break;
        r = q;
        ++m;
    }
    return m;
}

std::string Poly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        bool unit = c_[i].is_one();
        bool composite = ctx_->m() > 1 && !c_[i].is_prime_rational();
        if (i == 0 || !unit) {
            if (composite) os << "(" << c_[i].str() << ")";
            else os << c_[i].str();
        }
        if (i >= 1) {
            if (!unit) os << "*";
            os << var;
            if (i >= 2) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd(0, 0) undefined");
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x.divmod(y).second;
        x = y;
        y = r;
    }
    return x.monic();
}

void LaurentPoly::set(int e, const Fq& v) {
    if (v.is_zero()) c_.erase(e);
    else c_[e] = v;
}

LaurentPoly LaurentPoly::term(const Fq& c, int exp) {
    LaurentPoly l(c.ctx());
    l.set(exp, c);
    return l;
}

LaurentPoly LaurentPoly::from_poly(const Poly& p, int shift) {
    LaurentPoly l(p.ctx());
    for (int i = 0; i <= p.degree(); ++i) l.set(i + shift, p.coeff(i));
    return l;
}

Fq LaurentPoly::coeff(int e) const {
    auto it = c_.find(e);
    return it == c_.end() ? Fq::zero(*ctx_) : it->second;
}

int LaurentPoly::min_exp() const {
    if (c_.empty()) throw std::domain_error("exponent range of zero Laurent polynomial");
    return c_.begin()->first;
}

int LaurentPoly::max_exp() const {
    if (c_.empty()) throw std::domain_error("exponent range of zero Laurent polynomial");
    return c_.rbegin()->first;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, v] : o.c_) r.set(e, r.coeff(e) + v);
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [e, v] : o.c_) r.set(e, r.coeff(e) - v);
    return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly r(*ctx_);
    for (const auto& [e1, v1] : c_)
        for (const auto& [e2, v2] : o.c_) r.set(e1 + e2, r.coeff(e1 + e2) + v1 * v2);
    return r;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const { return c_ == o.c_; }

std::string LaurentPoly::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, v] : c_) {
        if (!first) os << " + ";
        if (e == 0 || !v.is_one()) {
            if (v.ctx().m() > 1 && !v.is_prime_rational()) os << "(" << v.str() << ")";
            else os << v.str();
            if (e != 0) os << "*";
        }
        if (e != 0) {
            os << var;
            if (e != 1) os << "^" << e;
        }
        first = false;
    }
    return os.str();
}

void RatFunc::reduce() {
    if (den_.is_zero()) throw std::domain_error("zero denominator");
    if (num_.is_zero()) {
        den_ = Poly::constant(Fq::one(ctx()));
        return;
    }
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_.divide_exact(g);
        den_ = den_.divide_exact(g);
    }
    Fq lead = den_.leading();
    if (!lead.is_one()) {
        Fq inv = lead.inverse();
        num_ = num_ * inv;
        den_ = den_ * inv;
    }
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

RatFunc RatFunc::t_power(const FqCtx& ctx, int e) {
    if (e >= 0) return of(Poly::t(ctx, e));
    return RatFunc(Poly::constant(Fq::one(ctx)), Poly::t(ctx, -e));
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator*(const RatFunc& o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }

RatFunc RatFunc::operator*(const Fq& s) const { return RatFunc(num_ * s, den_); }

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero rational function");
    return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_); }

bool RatFunc::operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

RatFunc RatFunc::derivative() const {
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RatFunc RatFunc::pth_power() const { return RatFunc(num_.pth_power(), den_.pth_power()); }

RatFunc RatFunc::pth_root() const { return RatFunc(num_.pth_root(), den_.pth_root()); }

bool RatFunc::is_pth_power() const {
    int p = ctx().p();
    auto check = [&](const Poly& f) {
        for (int i = 0; i <= f.degree(); ++i)
            if (i % p != 0 && !f.coeff(i).is_zero()) return false;
        return true;
    };
    return check(num_) && check(den_);
}

RatFunc RatFunc::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RatFunc r = RatFunc::constant(Fq::one(ctx())), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero rational function");
    return RatFunc(den_, num_);
}

int RatFunc::order_at(const Fq& a) const {
    if (is_zero()) throw std::domain_error("order of zero function");
    return num_.root_multiplicity(a) - den_.root_multiplicity(a);
}

int RatFunc::order_at_infinity() const {
    if (is_zero()) throw std::domain_error("order of zero function");
    return den_.degree() - num_.degree();
}

Fq RatFunc::eval(const Fq& a) const {
    if (is_zero()) return Fq::zero(ctx());
    Fq d = den_.eval(a);
    if (d.is_zero()) {
        // possibly removable after cancellation was already done: genuine pole
        throw std::domain_error("evaluation at a pole");
    }
    return num_.eval(a) / d;
}

Fq RatFunc::eval_at_infinity() const {
    if (is_zero()) return Fq::zero(ctx());
    int o = order_at_infinity();
    if (o < 0) throw std::domain_error("pole at infinity");
    if (o > 0) return Fq::zero(ctx());
    return num_.leading() / den_.leading();
}

std::string RatFunc::str(const std::string& var) const {
    if (den_.degree() == 0) return num_.str(var);
    return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
}

namespace {

// coefficients c_j of the polar part sum_j c_j (t-a)^{-j}, index j-1
std::vector<Fq> polar_coeffs_at(const RatFunc& f, const Fq& a) {
    const FqCtx& ctx = f.ctx();
    if (f.is_zero()) return {};
    int m = f.den().root_multiplicity(a);
    if (m == 0) return {};
    Poly rest = f.den().divide_exact(Poly::linear(a).pow(m));
    // series of num/rest around a to order m
    Poly nsh = f.num().shift(a);
    Poly dsh = rest.shift(a);
    Fq d0 = dsh.coeff(0).inverse();
    std::vector<Fq> inv_series(m, Fq::zero(ctx));
    inv_series[0] = d0;
    for (int i = 1; i < m; ++i) {
        Fq acc = Fq::zero(ctx);
        for (int j = 1; j <= i; ++j) acc = acc + dsh.coeff(j) * inv_series[i - j];
        inv_series[i] = -(d0 * acc);
    }
    std::vector<Fq> out(m, Fq::zero(ctx));
    for (int i = 0; i < m; ++i) {
        Fq acc = Fq::zero(ctx);
        for (int j = 0; j <= i; ++j) acc = acc + nsh.coeff(j) * inv_series[i - j];
        out[m - i - 1] = acc;  // pole order m - i
    }
    return out;
}

}  // namespace

PoleExpansion partial_fractions(const RatFunc& f, const std::vector<Fq>& points) {
    const FqCtx& ctx = f.ctx();
    PoleExpansion out{Poly(ctx), {}};
    out.polar.resize(points.size());
    if (f.is_zero()) return out;
    RatFunc rem = f;
    for (size_t k = 0; k < points.size(); ++k) {
        out.polar[k] = polar_coeffs_at(rem, points[k]);
        RatFunc polar(ctx);
        for (size_t j = 0; j < out.polar[k].size(); ++j)
            if (!out.polar[k][j].is_zero())
                polar = polar + RatFunc(Poly::constant(out.polar[k][j]),
                                        Poly::linear(points[k]).pow(static_cast<int>(j) + 1));
        rem = rem - polar;
        if (rem.is_zero()) return out;
    }
    // remaining part must be polynomial
    out.poly_part = rem.num().divide_exact(rem.den());
    return out;
}

RatFunc polar_part_at(const RatFunc& f, const Fq& a) {
    const FqCtx& ctx = f.ctx();
    RatFunc out(ctx);
    auto coeffs = polar_coeffs_at(f, a);
    for (size_t j = 0; j < coeffs.size(); ++j)
        if (!coeffs[j].is_zero())
            out = out + RatFunc(Poly::constant(coeffs[j]), Poly::linear(a).pow(static_cast<int>(j) + 1));
    return out;
}

std::vector<Fq> expansion_at_infinity(const RatFunc& f, int n) {
    const FqCtx& ctx = f.ctx();
    std::vector<Fq> out(n, Fq::zero(ctx));
    if (f.is_zero()) return out;
    if (f.order_at_infinity() <= 0) throw std::domain_error("function does not vanish at infinity");
    // substitute t = 1/s: f(1/s) = s^(shift) * N(s)/D(s), expand around s = 0
    const Poly& num = f.num();
    const Poly& den = f.den();
    int dn = num.degree(), dd = den.degree();
    // reversed coefficient polynomials in s
    std::vector<Fq> nrev(dn + 1, Fq::zero(ctx)), drev(dd + 1, Fq::zero(ctx));
    for (int i = 0; i <= dn; ++i) nrev[dn - i] = num.coeff(i);
    for (int i = 0; i <= dd; ++i) drev[dd - i] = den.coeff(i);
    Poly N(ctx, std::move(nrev)), D(ctx, std::move(drev));
    int shift = dd - dn;  // f(1/s) = s^shift N(s)/D(s), D(0) != 0
    Fq d0 = D.coeff(0).inverse();
    std::vector<Fq> inv_series(n + 1, Fq::zero(ctx));
    inv_series[0] = d0;
    for (int i = 1; i <= n; ++i) {
        Fq acc = Fq::zero(ctx);
        for (int j = 1; j <= i; ++j) acc = acc + D.coeff(j) * inv_series[i - j];
        inv_series[i] = -(d0 * acc);
    }
    for (int k = 1; k <= n; ++k) {
        // coefficient of s^k in s^shift N(s)/D(s) = coeff of s^{k-shift} in N/D
        int i = k - shift;
        if (i < 0) continue;
        Fq acc = Fq::zero(ctx);
        for (int j = 0; j <= i; ++j) acc = acc + N.coeff(j) * inv_series[i - j];
        out[k - 1] = acc;
    }
    return out;
}

}  // namespace hdrflow
