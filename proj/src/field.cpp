#include "hdrflow/field.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace hdrflow {

namespace {

int mod(long a, int p) {
    long r = a % p;
    return static_cast<int>(r < 0 ? r + p : r);
}

// dense F_p polynomial helpers for the modulus search, coeff[i] of x^i
using IPoly = std::vector<int>;

void itrim(IPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

IPoly imul(const IPoly& a, const IPoly& b, int p) {
    if (a.empty() || b.empty()) return {};
    IPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (size_t j = 0; j < b.size(); ++j) r[i + j] = mod(r[i + j] + long(a[i]) * b[j], p);
    itrim(r);
    return r;
}

IPoly imod(IPoly a, const IPoly& f, int p) {
    // f monic
    while (a.size() >= f.size()) {
        int c = a.back();
        size_t d = a.size() - f.size();
        if (c)
            for (size_t i = 0; i < f.size(); ++i) a[i + d] = mod(a[i + d] - long(c) * f[i], p);
        a.pop_back();
        itrim(a);
    }
    return a;
}

IPoly ipowmod(IPoly base, long e, const IPoly& f, int p) {
    IPoly r{1};
    base = imod(std::move(base), f, p);
    while (e > 0) {
        if (e & 1) r = imod(imul(r, base, p), f, p);
        base = imod(imul(base, base, p), f, p);
        e >>= 1;
    }
    return r;
}

IPoly igcd(IPoly a, IPoly b, int p) {
    itrim(a);
    itrim(b);
    while (!b.empty()) {
        // reduce a mod b after making b monic
        int lead = b.back();
        if (lead != 1) {
            // scale b monic
            long inv = 1;
            // Fermat inverse
            long base = lead, ee = p - 2;
            inv = 1;
            while (ee) {
                if (ee & 1) inv = inv * base % p;
                base = base * base % p;
                ee >>= 1;
            }
            for (auto& c : b) c = mod(c * inv, p);
        }
        IPoly r = imod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

std::vector<long> prime_factors(long n) {
    std::vector<long> f;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            f.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) f.push_back(n);
    return f;
}

bool is_irreducible(const IPoly& f, int p, int m) {
    // x^{p^m} == x mod f, and gcd(x^{p^d} - x, f) = 1 for maximal proper d | m
    IPoly x{0, 1};
    long q = 1;
    for (int i = 0; i < m; ++i) q *= p;
    IPoly xq = ipowmod(x, q, f, p);
    IPoly diff = xq;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = mod(diff[1] - 1, p);
    itrim(diff);
    if (!diff.empty()) return false;
    for (long ell : prime_factors(m)) {
        long qd = 1;
        for (int i = 0; i < m / ell; ++i) qd *= p;
        IPoly xd = ipowmod(x, qd, f, p);
        xd.resize(std::max<size_t>(xd.size(), 2), 0);
        xd[1] = mod(xd[1] - 1, p);
        itrim(xd);
        IPoly g = igcd(f, xd, p);
        if (g.size() != 1) return false;
    }
    return true;
}

bool is_primitive(const IPoly& f, int p, int m) {
    long q = 1;
    for (int i = 0; i < m; ++i) q *= p;
    IPoly x{0, 1};
    for (long ell : prime_factors(q - 1)) {
        IPoly e = ipowmod(x, (q - 1) / ell, f, p);
        if (e.size() == 1 && e[0] == 1) return false;
    }
    return true;
}

IPoly find_modulus(int p, int m) {
    if (m == 1) {
        // x - g with g the smallest primitive root: modulus x + (p - g)
        for (int g = 2; g < p; ++g) {
            IPoly f{mod(-g, p), 1};
            if (is_primitive(f, p, 1)) return f;
        }
        throw std::logic_error("no primitive root found");
    }
    // lexicographically smallest (c0, c1, ..) monic primitive polynomial
    long count = 1;
    for (int i = 0; i < m; ++i) count *= p;
    for (long code = 0; code < count; ++code) {
        IPoly f(m + 1, 0);
        long c = code;
        for (int i = m - 1; i >= 0; --i) {
            f[i] = static_cast<int>(c % p);
            c /= p;
        }
        f[m] = 1;
        if (f[0] == 0) continue;  // reducible (x divides)
        if (!is_irreducible(f, p, m)) continue;
        if (!is_primitive(f, p, m)) continue;
        return f;
    }
    throw std::logic_error("no primitive modulus found");
}

}  // namespace

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FqCtx::FqCtx(int p, int m) : p_(p), m_(m) {
    if (!is_prime(p) || p == 2) throw std::invalid_argument("p must be an odd prime");
    if (m < 1 || m > kMaxDeg) throw std::invalid_argument("extension degree out of range");
    q_ = 1;
    for (int i = 0; i < m; ++i) q_ *= p;
    IPoly f = find_modulus(p, m);
    for (int i = 0; i < m; ++i) mod_[i] = i < static_cast<int>(f.size()) ? f[i] : 0;
    // x^{m+k} reduction rows for k = 0..m-2
    for (int k = 0; k <= m - 2; ++k) {
        IPoly shifted(size_t(m + k) + 1, 0);
        shifted[m + k] = 1;
        IPoly red = imod(shifted, f, p);
        red.resize(m, 0);
        for (int i = 0; i < m; ++i) red_[k][i] = red[i];
    }
    // frobenius rows: sigma(x^i) = x^{i p} mod f
    for (int i = 0; i < m; ++i) {
        IPoly xi(size_t(i) + 1, 0);
        xi[i] = 1;
        IPoly fr = ipowmod(xi, p, f, p);
        fr.resize(m, 0);
        for (int j = 0; j < m; ++j) frob_[i][j] = fr[j];
    }
}

const FqCtx& FqCtx::get(int p, int m) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<FqCtx>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, m);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<FqCtx>(p, m)).first;
    return *it->second;
}

std::string FqCtx::modulus_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < m_; ++i) {
        if (mod_[i] == 0) continue;
        if (!first) os << "+";
        os << mod_[i];
        if (i >= 1) os << "*x";
        if (i >= 2) os << "^" << i;
        first = false;
    }
    if (!first) os << "+";
    os << "x^" << m_;
    return os.str();
}

Fq::Fq(const FqCtx& ctx, long value) : ctx_(&ctx), c_{} { c_[0] = mod(value, ctx.p()); }

Fq Fq::gen(const FqCtx& ctx) {
    if (ctx.m() == 1) throw std::invalid_argument("prime field has no generator coordinate x");
    Fq a(ctx, 0);
    a.c_[1] = 1;
    return a;
}

Fq Fq::from_coeffs(const FqCtx& ctx, const std::vector<int>& coeffs) {
    if (static_cast<int>(coeffs.size()) > ctx.m()) throw std::invalid_argument("too many coefficients");
    Fq a(ctx, 0);
    for (size_t i = 0; i < coeffs.size(); ++i) a.c_[i] = mod(coeffs[i], ctx.p());
    return a;
}

const FqCtx& Fq::ctx() const {
    if (!ctx_) throw std::logic_error("use of uninitialized field element");
    return *ctx_;
}

bool Fq::is_zero() const {
    for (int i = 0; i < ctx().m(); ++i)
        if (c_[i]) return false;
    return true;
}

bool Fq::is_one() const {
    if (c_[0] != 1) return false;
    for (int i = 1; i < ctx().m(); ++i)
        if (c_[i]) return false;
    return true;
}

Fq Fq::operator+(const Fq& o) const {
    const FqCtx& cx = ctx();
    if (&cx != &o.ctx()) throw std::invalid_argument("field context mismatch");
    Fq r(cx, 0);
    for (int i = 0; i < cx.m(); ++i) r.c_[i] = mod(c_[i] + o.c_[i], cx.p());
    return r;
}

Fq Fq::operator-(const Fq& o) const {
    const FqCtx& cx = ctx();
    if (&cx != &o.ctx()) throw std::invalid_argument("field context mismatch");
    Fq r(cx, 0);
    for (int i = 0; i < cx.m(); ++i) r.c_[i] = mod(c_[i] - o.c_[i], cx.p());
    return r;
}

Fq Fq::operator-() const {
    const FqCtx& cx = ctx();
    Fq r(cx, 0);
    for (int i = 0; i < cx.m(); ++i) r.c_[i] = mod(-c_[i], cx.p());
    return r;
}

Fq Fq::operator*(const Fq& o) const {
    const FqCtx& cx = ctx();
    if (&cx != &o.ctx()) throw std::invalid_argument("field context mismatch");
    const int m = cx.m(), p = cx.p();
    std::array<long, 2 * FqCtx::kMaxDeg - 1> prod{};
    for (int i = 0; i < m; ++i)
        if (c_[i])
            for (int j = 0; j < m; ++j) prod[i + j] += long(c_[i]) * o.c_[j];
    Fq r(cx, 0);
    for (int i = 0; i < m; ++i) r.c_[i] = mod(prod[i], p);
    for (int k = 0; k <= m - 2; ++k) {
        long hi = prod[m + k] % p;
        if (hi) {
            const auto& row = cx.reduction_row(k);
            for (int i = 0; i < m; ++i) r.c_[i] = mod(r.c_[i] + hi * row[i], p);
        }
    }
    return r;
}

Fq Fq::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in F_q");
    return pow(ctx().q() - 2);
}

Fq Fq::operator/(const Fq& o) const { return *this * o.inverse(); }

bool Fq::operator==(const Fq& o) const {
    const FqCtx& cx = ctx();
    if (&cx != &o.ctx()) throw std::invalid_argument("field context mismatch");
    for (int i = 0; i < cx.m(); ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

Fq Fq::pow(long e) const {
    const FqCtx& cx = ctx();
    if (e < 0) return inverse().pow(-e);
    Fq r = Fq::one(cx), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

Fq Fq::frobenius(int e) const {
    const FqCtx& cx = ctx();
    e = ((e % cx.m()) + cx.m()) % cx.m();
    Fq r = *this;
    for (int step = 0; step < e; ++step) {
        Fq next(cx, 0);
        for (int i = 0; i < cx.m(); ++i)
            if (r.c_[i]) {
                const auto& row = cx.frobenius_row(i);
                for (int j = 0; j < cx.m(); ++j) next.c_[j] = mod(next.c_[j] + long(r.c_[i]) * row[j], cx.p());
            }
        r = next;
    }
    return r;
}

bool Fq::in_subfield(int d) const { return frobenius(d) == *this; }

long Fq::as_int() const {
    if (!is_prime_rational()) throw std::domain_error("element not prime-rational");
    return c_[0];
}

bool Fq::is_prime_rational() const {
    for (int i = 1; i < ctx().m(); ++i)
        if (c_[i]) return false;
    return true;
}

std::string Fq::str() const {
    const FqCtx& cx = ctx();
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < cx.m(); ++i) {
        if (!c_[i]) continue;
        if (!first) os << "+";
        if (i == 0 || c_[i] != 1) os << c_[i];
        if (i >= 1) {
            if (c_[i] != 1) os << "*";
            os << "x";
        }
        if (i >= 2) os << "^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

bool Fq::operator<(const Fq& o) const {
    const FqCtx& cx = ctx();
    for (int i = cx.m() - 1; i >= 0; --i)
        if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    return false;
}

std::vector<Fq> all_elements(const FqCtx& ctx) {
    std::vector<Fq> out;
    out.reserve(ctx.q());
    std::vector<int> coeffs(ctx.m(), 0);
    for (long n = 0; n < ctx.q(); ++n) {
        long c = n;
        for (int i = 0; i < ctx.m(); ++i) {
            coeffs[i] = static_cast<int>(c % ctx.p());
            c /= ctx.p();
        }
        out.push_back(Fq::from_coeffs(ctx, coeffs));
    }
    return out;
}

Fq embed(const Fq& a, const FqCtx& target) {
    if (a.ctx().p() != target.p()) throw std::invalid_argument("cannot embed across characteristics");
    if (&a.ctx() == &target) return a;
    if (!a.is_prime_rational()) throw std::invalid_argument("only prime-rational embedding supported");
    return Fq(target, a.coeff(0));
}

W2Scalar::W2Scalar(int p, long value) : p_(p) {
    long m = long(p) * p;
    v_ = ((value % m) + m) % m;
}

W2Scalar W2Scalar::operator+(const W2Scalar& o) const {
    if (p_ != o.p_) throw std::invalid_argument("W2 modulus mismatch");
    return W2Scalar(p_, v_ + o.v_);
}

W2Scalar W2Scalar::operator-(const W2Scalar& o) const {
    if (p_ != o.p_) throw std::invalid_argument("W2 modulus mismatch");
    return W2Scalar(p_, v_ - o.v_);
}

W2Scalar W2Scalar::operator*(const W2Scalar& o) const {
    if (p_ != o.p_) throw std::invalid_argument("W2 modulus mismatch");
    return W2Scalar(p_, v_ * o.v_);
}

W2Scalar W2Scalar::operator-() const { return W2Scalar(p_, -v_); }

int W2Scalar::divide_by_p() const {
    if (v_ % p_ != 0) throw std::domain_error("W2 value not divisible by p");
    return static_cast<int>((v_ / p_) % p_);
}

}  // namespace hdrflow
