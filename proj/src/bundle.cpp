#include "hdrflow/bundle.hpp"

#include <algorithm>

namespace hdrflow {

namespace {

bool is_unit_on_chart(const MarkedProjLine& X, int chart, const RatFunc& f) {
    if (f.is_zero()) return false;
    Poly probe = f.num() * f.den();
    for (int c = 0; c < X.num_charts() - 1; ++c) {
        if (X.chart_is_finite(chart) && c == chart) continue;
        int mult = probe.root_multiplicity(X.chart_point(c));
        if (mult) probe = probe.divide_exact(Poly::linear(X.chart_point(c)).pow(mult));
    }
    if (X.chart_is_finite(chart)) {
        if (probe.degree() != 0) return false;
        return f.order_at(X.chart_point(chart)) == 0;
    }
    if (probe.degree() != 0) return false;
    return f.order_at_infinity() == 0;
}

}  // namespace

Mat2R Mat2R::identity(const FqCtx& ctx) {
    Mat2R r(ctx);
    r.at(0, 0) = RatFunc::constant(Fq::one(ctx));
    r.at(1, 1) = RatFunc::constant(Fq::one(ctx));
    return r;
}

Mat2R Mat2R::diag(const RatFunc& x, const RatFunc& y) {
    Mat2R r(x.ctx());
    r.at(0, 0) = x;
    r.at(1, 1) = y;
    return r;
}

Mat2R Mat2R::operator*(const Mat2R& o) const {
    Mat2R r(m[0][0].ctx());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.at(i, j) = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    return r;
}

Mat2R Mat2R::operator+(const Mat2R& o) const {
    Mat2R r(m[0][0].ctx());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.at(i, j) = m[i][j] + o.m[i][j];
    return r;
}

Mat2R Mat2R::operator-(const Mat2R& o) const {
    Mat2R r(m[0][0].ctx());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.at(i, j) = m[i][j] - o.m[i][j];
    return r;
}

Mat2R Mat2R::scale(const RatFunc& s) const {
    Mat2R r(m[0][0].ctx());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.at(i, j) = m[i][j] * s;
    return r;
}

std::array<RatFunc, 2> Mat2R::apply(const std::array<RatFunc, 2>& v) const {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

RatFunc Mat2R::det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
RatFunc Mat2R::trace() const { return m[0][0] + m[1][1]; }

Mat2R Mat2R::inverse() const {
    RatFunc d = det();
    if (d.is_zero()) throw std::domain_error("singular 2x2 matrix");
    Mat2R r(m[0][0].ctx());
    r.at(0, 0) = m[1][1] / d;
    r.at(0, 1) = -m[0][1] / d;
    r.at(1, 0) = -m[1][0] / d;
    r.at(1, 1) = m[0][0] / d;
    return r;
}

Mat2R Mat2R::pth_power_entries() const {
    Mat2R r(m[0][0].ctx());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.at(i, j) = m[i][j].pth_power();
    return r;
}

Mat2R Mat2R::pth_root_entries() const {
    Mat2R r(m[0][0].ctx());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.at(i, j) = m[i][j].pth_root();
    return r;
}

bool Mat2R::is_zero() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!m[i][j].is_zero()) return false;
    return true;
}

bool Mat2R::operator==(const Mat2R& o) const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!(m[i][j] == o.m[i][j])) return false;
    return true;
}

RankTwoBundle RankTwoBundle::extension(const LineBundleF& sub, const LineBundleF& quot, const CechClass& xi) {
    if (&sub.curve() != &quot.curve()) throw std::invalid_argument("extension components on different curves");
    RankTwoBundle b(sub, quot);
    b.ext_ = xi;
    return b;
}

RankTwoBundle RankTwoBundle::direct_sum(const LineBundleF& a, const LineBundleF& b) {
    LineBundleF hom = a.tensor(b.dual());
    return extension(a, b, CechClass::zero(hom, Cover::atlas(a.curve())));
}

RankTwoBundle RankTwoBundle::generic(const LineBundleF& c1, const LineBundleF& c2,
                                     std::map<std::pair<int, int>, Mat2R> t1) {
    RankTwoBundle b(c1, c2);
    b.t1_ = std::move(t1);
    return b;
}

const CechClass& RankTwoBundle::extension_class_cochain() const {
    if (!ext_) throw std::logic_error("bundle is not in extension form");
    return *ext_;
}

Vec RankTwoBundle::extension_class() const { return extension_class_cochain().canonical_coords(); }

Mat2R RankTwoBundle::transition1(int i, int j) const {
    const FqCtx& ctx = curve().ctx();
    if (i == j) return Mat2R::identity(ctx);
    if (ext_) {
        Mat2R t = Mat2R::identity(ctx);
        RatFunc c = i < j ? ext_->component(i, j) : -ext_->component(j, i);
        t.at(0, 1) = c;
        return t;
    }
    if (i < j) {
        auto it = t1_.find({i, j});
        if (it == t1_.end()) return Mat2R::identity(ctx);
        return it->second;
    }
    auto it = t1_.find({j, i});
    if (it == t1_.end()) return Mat2R::identity(ctx);
    return it->second.inverse();
}

Mat2R RankTwoBundle::chart_transition(int i, int j) const {
    Mat2R phi_i = Mat2R::diag(c1_.frame(i), c2_.frame(i));
    Mat2R phi_j = Mat2R::diag(c1_.frame(j), c2_.frame(j));
    return phi_i.inverse() * transition1(i, j) * phi_j;
}

RankTwoBundle RankTwoBundle::twist(int n) const {
    RankTwoBundle b(c1_.twist(n), c2_.twist(n));
    b.t1_ = t1_;
    b.ext_ = ext_;
    return b;
}

bool RankTwoBundle::transitions_are_cocycle() const {
    int n = curve().num_charts();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                Mat2R lhs = transition1(a, b) * transition1(b, c);
                if (!(lhs == transition1(a, c))) return false;
            }
    return true;
}

std::array<Fq, 2> RankTwoSection::value_at_chart_point(const RankTwoBundle& H, int chart) const {
    const MarkedProjLine& X = H.curve();
    RatFunc u = comp[chart][0] / H.component1().twist(twist).frame(chart);
    RatFunc v = comp[chart][1] / H.component2().twist(twist).frame(chart);
    if (!X.chart_is_finite(chart)) {
        RatFunc src = RatFunc::t_power(X.ctx(), -twist);
        u = u * src;
        v = v * src;
        return {u.eval_at_infinity(), v.eval_at_infinity()};
    }
    Fq pt = X.chart_point(chart);
    return {u.eval(pt), v.eval(pt)};
}

namespace {

// connecting map of the extension LES twisted by O(n):
// H^0(quot(n)) -> H^1(sub(n)) on monomial bases
Mat connecting_map(const RankTwoBundle& H, int n) {
    const FqCtx& ctx = H.curve().ctx();
    LineBundleF subn = H.sub().twist(n);
    LineBundleF quotn = H.quot().twist(n);
    int cols = h0_dim(quotn), rows = h1_dim(subn);
    Mat m(ctx, rows, cols);
    const CechClass& xi = H.extension_class_cochain();
    for (int k = 0; k < cols; ++k) {
        CechClass prod = xi.multiply_into(subn, RatFunc::of(Poly::t(ctx, k)));
        Vec coords = prod.canonical_coords();
        for (int r = 0; r < rows; ++r) m.at(r, k) = coords[r];
    }
    return m;
}

std::vector<RankTwoSection> h0_sections_ext(const RankTwoBundle& H, int n) {
    const MarkedProjLine& X = H.curve();
    const FqCtx& ctx = X.ctx();
    std::vector<RankTwoSection> out;
    LineBundleF subn = H.sub().twist(n);
    int ncharts = X.num_charts();
    for (const Poly& s : h0_basis(subn)) {
        RankTwoSection sec;
        sec.twist = n;
        sec.comp.assign(ncharts, {RatFunc::of(s), RatFunc(ctx)});
        out.push_back(std::move(sec));
    }
    Mat delta = connecting_map(H, n);
    if (delta.cols() > 0) {
        const CechClass& xi = H.extension_class_cochain();
        for (const Vec& kv : delta.kernel_basis()) {
            Poly g(ctx);
            for (size_t k = 0; k < kv.size(); ++k) g = g + Poly::t(ctx, static_cast<int>(k)) * kv[k];
            CechClass prod = xi.multiply_into(subn, RatFunc::of(g));
            auto wit = prod.coboundary_witness();
            if (!wit) throw std::logic_error("kernel of connecting map without coboundary witness");
            RankTwoSection sec;
            sec.twist = n;
            sec.comp.reserve(ncharts);
            // need F_a - F_b = (xi g)_ab while (delta wit)_ab = wit_b - wit_a
            for (int chart = 0; chart < ncharts; ++chart)
                sec.comp.push_back({-(*wit)[chart], RatFunc::of(g)});
            out.push_back(std::move(sec));
        }
    }
    return out;
}

// generic truncated section solver for non-extension bundles
std::vector<RankTwoSection> h0_sections_generic(const RankTwoBundle& H, int n) {
    const MarkedProjLine& X = H.curve();
    const FqCtx& ctx = X.ctx();
    int ncharts = X.num_charts();
    int bound = 2;
    auto grow = [&](const RatFunc& f) {
        if (f.is_zero()) return;
        bound = std::max(bound, f.num().degree() + 1);
        bound = std::max(bound, f.den().degree() + 1);
    };
    for (int i = 0; i < ncharts; ++i)
        for (int j = i + 1; j < ncharts; ++j) {
            Mat2R t = H.transition1(i, j);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) grow(t.at(r, c));
        }
    for (int c = 0; c < ncharts; ++c) {
        grow(H.component1().frame(c));
        grow(H.component2().frame(c));
    }
    bound += std::abs(n) + 2;
    const int ND = bound, NP = bound;
    std::vector<Fq> pts = X.finite_points();
    int poly_cap = 3 * ND, pole_cap = 3 * NP;
    int dim_fun = (poly_cap + 1) + static_cast<int>(pts.size()) * pole_cap;
    auto vec_of = [&](const RatFunc& f) {
        Vec v(dim_fun, Fq::zero(ctx));
        if (f.is_zero()) return v;
        PoleExpansion pe = partial_fractions(f, pts);
        if (pe.poly_part.degree() > poly_cap) throw std::logic_error("section solver truncation exceeded");
        for (int i = 0; i <= pe.poly_part.degree(); ++i) v[i] = pe.poly_part.coeff(i);
        for (size_t k = 0; k < pts.size(); ++k) {
            if (static_cast<int>(pe.polar[k].size()) > pole_cap)
                throw std::logic_error("section solver truncation exceeded");
            for (size_t j = 0; j < pe.polar[k].size(); ++j)
                v[poly_cap + 1 + static_cast<int>(k) * pole_cap + static_cast<int>(j)] = pe.polar[k][j];
        }
        return v;
    };
    struct Unknown {
        int chart, comp;
        RatFunc f;
    };
    std::vector<Unknown> unknowns;
    LineBundleF prof1 = H.component1().twist(n), prof2 = H.component2().twist(n);
    for (int chart = 0; chart < ncharts; ++chart) {
        std::vector<RatFunc> inner;
        inner.push_back(RatFunc::constant(Fq::one(ctx)));
        for (int pt = 0; pt < ncharts - 1; ++pt) {
            if (X.chart_is_finite(chart) && pt == chart) continue;
            for (int j = 1; j <= NP; ++j)
                inner.push_back(RatFunc(Poly::constant(Fq::one(ctx)), Poly::linear(X.chart_point(pt)).pow(j)));
        }
        if (X.chart_is_finite(chart))
            for (int e = 1; e <= ND; ++e) inner.push_back(RatFunc::of(Poly::t(ctx, e)));
        for (const auto& u : inner) {
            unknowns.push_back({chart, 0, u * prof1.frame(chart)});
            unknowns.push_back({chart, 1, u * prof2.frame(chart)});
        }
    }
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < ncharts; ++i)
        for (int j = i + 1; j < ncharts; ++j) pairs.push_back({i, j});
    std::vector<Vec> cols;
    cols.reserve(unknowns.size());
    for (const auto& un : unknowns) {
        Vec full;
        for (auto [i, j] : pairs) {
            std::array<RatFunc, 2> val = {RatFunc(ctx), RatFunc(ctx)};
            if (un.chart == i) val[un.comp] = val[un.comp] + un.f;
            if (un.chart == j) {
                Mat2R t = H.transition1(i, j);
                val[0] = val[0] - t.at(0, un.comp) * un.f;
                val[1] = val[1] - t.at(1, un.comp) * un.f;
            }
            Vec v0 = vec_of(val[0]);
            Vec v1 = vec_of(val[1]);
            full.insert(full.end(), v0.begin(), v0.end());
            full.insert(full.end(), v1.begin(), v1.end());
        }
        cols.push_back(std::move(full));
    }
    Mat sys = Mat::from_columns(ctx, static_cast<int>(cols.empty() ? 0 : cols[0].size()), cols);
    std::vector<RankTwoSection> out;
    for (const Vec& kv : sys.kernel_basis()) {
        RankTwoSection sec;
        sec.twist = n;
        sec.comp.assign(ncharts, {RatFunc(ctx), RatFunc(ctx)});
        for (size_t u = 0; u < unknowns.size(); ++u) {
            if (kv[u].is_zero()) continue;
            const Unknown& un = unknowns[u];
            sec.comp[un.chart][un.comp] = sec.comp[un.chart][un.comp] + un.f * kv[u];
        }
        out.push_back(std::move(sec));
    }
    return out;
}

void normalize_section(RankTwoSection& s) {
    // deterministic scaling: leading coefficient of the first nonzero
    // component on chart 0 becomes 1
    for (int comp = 1; comp >= 0; --comp) {
        const RatFunc& f = s.comp[0][comp];
        if (f.is_zero()) continue;
        Fq lead = f.num().coeff(f.num().degree());
        Fq inv = lead.inverse();
        for (auto& pair : s.comp) {
            pair[0] = pair[0] * inv;
            pair[1] = pair[1] * inv;
        }
        return;
    }
}

}  // namespace

int h0_of_rank2(const RankTwoBundle& H, int n) {
    if (H.is_extension()) {
        int base = h0_dim(H.sub().twist(n));
        Mat delta = connecting_map(H, n);
        int ker = delta.cols() - (delta.cols() ? delta.rank() : 0);
        return base + ker;
    }
    return static_cast<int>(h0_sections_generic(H, n).size());
}

std::vector<RankTwoSection> h0_sections(const RankTwoBundle& H, int n) {
    return H.is_extension() ? h0_sections_ext(H, n) : h0_sections_generic(H, n);
}

std::pair<int, int> splitting_type(const RankTwoBundle& H) {
    int dtot = H.det_degree();
    int hi;
    if (H.is_extension()) hi = std::max(H.sub().degree(), H.quot().degree());
    else {
        hi = std::max(std::abs(H.component1().degree()), std::abs(H.component2().degree())) + 2;
        for (int i = 0; i < H.curve().num_charts(); ++i)
            for (int j = i + 1; j < H.curve().num_charts(); ++j) {
                Mat2R t = H.transition1(i, j);
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c)
                        if (!t.at(r, c).is_zero())
                            hi = std::max(hi, t.at(r, c).num().degree() + t.at(r, c).den().degree());
            }
    }
    for (int d = hi; 2 * d >= dtot; --d)
        if (h0_of_rank2(H, -d) > 0) return {d, dtot - d};
    throw std::logic_error("splitting type scan failed");
}

RankTwoSection max_sub_line(const RankTwoBundle& H) {
    auto [d1, d2] = splitting_type(H);
    if (d1 == d2) throw BalancedSplittingError();
    auto secs = h0_sections(H, -d1);
    if (secs.size() != 1) throw std::logic_error("maximal sub-line space is not one-dimensional");
    RankTwoSection s = std::move(secs[0]);
    normalize_section(s);
    return s;
}

int divisor_gcd_degree(const SectionHom& s1, const SectionHom& s2) {
    if (s1.coeff.is_zero() || s2.coeff.is_zero()) throw std::invalid_argument("zero section has no divisor");
    Poly g = poly_gcd(s1.coeff, s2.coeff);
    return g.degree() + std::min(s1.infinity_multiplicity(), s2.infinity_multiplicity());
}

GradedHiggs GradedHiggs::maximal(const MarkedProjLine& X, int up, int down) {
    if (up - down != X.r() - 2)
        throw std::invalid_argument("maximal Higgs field needs up - down = deg omega_log");
    return GradedHiggs(X, up, down, Poly::constant(Fq::one(X.ctx())));
}

HiggsBundle to_higgs(const GradedHiggs& g) {
    const MarkedProjLine& X = *g.X;
    const FqCtx& ctx = X.ctx();
    LineBundleF down = LineBundleF::canonical(X, g.down_deg);
    LineBundleF up = LineBundleF::canonical(X, g.up_deg);
    HiggsBundle h{RankTwoBundle::direct_sum(down, up), {}};
    LineBundleF w = omega_log(X);
    for (int chart = 0; chart < X.num_charts(); ++chart) {
        Mat2R th(ctx);
        // theta(e_up) = S e_down (x) w in "1"-coefficients; the chart
        // coefficient carries the frame conversion factors
        th.at(0, 1) = RatFunc::of(g.theta) * up.frame(chart) / (down.frame(chart) * w.frame(chart));
        h.theta.push_back(th);
    }
    return h;
}

bool HiggsBundle::theta_nilpotent() const {
    for (const auto& th : theta) {
        Mat2R sq = th * th;
        if (!sq.is_zero()) return false;
    }
    return true;
}

bool HiggsBundle::theta_chart_compatible() const {
    const MarkedProjLine& X = E.curve();
    LineBundleF w = omega_log(X);
    for (int a = 0; a < X.num_charts(); ++a)
        for (int b = a + 1; b < X.num_charts(); ++b) {
            Mat2R t = E.chart_transition(a, b);
            RatFunc q = w.frame(a) / w.frame(b);
            Mat2R expected = (t.inverse() * theta[a] * t).scale(q);
            if (!(expected == theta[b])) return false;
        }
    return true;
}

GradedHiggs to_graded(const HiggsBundle& h) {
    const MarkedProjLine& X = h.E.curve();
    const FqCtx& ctx = X.ctx();
    bool theta_zero = true;
    for (const auto& th : h.theta)
        if (!th.is_zero()) theta_zero = false;
    if (theta_zero) {
        auto [d1, d2] = splitting_type(h.E);
        return GradedHiggs(X, d1, d2, Poly(ctx));
    }
    if (!h.theta_nilpotent()) throw std::invalid_argument("to_graded requires nilpotent theta");
    int det_deg = h.E.det_degree();
    auto [d1, d2] = splitting_type(h.E);
    (void)d2;
    // the kernel line of theta, scanned downward from the maximal sub degree
    auto theta_killed = [&](const RankTwoSection& s) {
        for (int chart = 0; chart < X.num_charts(); ++chart) {
            Mat2R phi = Mat2R::diag(h.E.component1().twist(s.twist).frame(chart),
                                    h.E.component2().twist(s.twist).frame(chart));
            std::array<RatFunc, 2> x = {s.comp[chart][0] / phi.at(0, 0), s.comp[chart][1] / phi.at(1, 1)};
            auto y = h.theta[chart].apply(x);
            if (!y[0].is_zero() || !y[1].is_zero()) return false;
        }
        return true;
    };
    std::optional<RankTwoSection> v_found;
    int dK = d1;
    for (; dK >= det_deg - d1 - 1; --dK) {
        for (auto& s : h0_sections(h.E, -dK))
            if (theta_killed(s)) {
                v_found = s;
                break;
            }
        if (v_found) break;
    }
    if (!v_found) throw std::logic_error("theta kernel line not found");
    RankTwoSection v = *v_found;
    normalize_section(v);
    int dU = det_deg - dK;
    std::vector<RankTwoSection> cands = h0_sections(h.E, -dU);
    std::optional<RankTwoSection> w_found;
    for (const auto& w : cands) {
        bool good = true;
        for (int chart = 0; chart < X.num_charts() && good; ++chart) {
            RatFunc d = v.comp[chart][0] * w.comp[chart][1] - v.comp[chart][1] * w.comp[chart][0];
            RatFunc frame =
                h.E.component1().twist(-dK).frame(chart) * h.E.component2().twist(-dU).frame(chart);
            if (d.is_zero() || !is_unit_on_chart(X, chart, d / frame)) good = false;
        }
        if (good) {
            w_found = w;
            break;
        }
    }
    if (!w_found) throw std::logic_error("graded complement not found");
    const RankTwoSection& w = *w_found;
    LineBundleF om = omega_log(X);
    std::optional<RatFunc> S;
    for (int chart = 0; chart < X.num_charts(); ++chart) {
        Mat2R phi = Mat2R::diag(h.E.component1().frame(chart), h.E.component2().frame(chart));
        auto chart_coords = [&](const RankTwoSection& s, int src_deg) {
            RatFunc srcframe =
                X.chart_is_finite(chart) ? RatFunc::constant(Fq::one(ctx)) : RatFunc::t_power(ctx, src_deg);
            return std::array<RatFunc, 2>{s.comp[chart][0] / phi.at(0, 0) * srcframe,
                                          s.comp[chart][1] / phi.at(1, 1) * srcframe};
        };
        auto wx = chart_coords(w, dU);
        auto vx = chart_coords(v, dK);
        auto y = h.theta[chart].apply(wx);
        RatFunc s_chart(ctx);
        if (!y[0].is_zero() || !y[1].is_zero()) {
            s_chart = vx[0].is_zero() ? y[1] / vx[1] : y[0] / vx[0];
            if (!(y[1] - s_chart * vx[1]).is_zero() || !(y[0] - s_chart * vx[0]).is_zero())
                throw std::logic_error("theta does not preserve the kernel flag");
        }
        RatFunc dstframe = X.chart_is_finite(chart) ? RatFunc::constant(Fq::one(ctx)) : RatFunc::t_power(ctx, dK);
        RatFunc srcframe = X.chart_is_finite(chart) ? RatFunc::constant(Fq::one(ctx)) : RatFunc::t_power(ctx, dU);
        RatFunc S_chart = s_chart * om.frame(chart) * dstframe / srcframe;
        if (!S) S = S_chart;
        else if (!(*S == S_chart))
            throw ChartIncompatibleError("graded theta section disagrees between charts");
    }
    if (S->is_zero()) return GradedHiggs(X, dU, dK, Poly(ctx));
    if (S->den().degree() != 0) throw std::logic_error("graded theta section is not polynomial");
    return GradedHiggs(X, dU, dK, S->num() * S->den().coeff(0).inverse());
}

Mat2R FlatBundle::conn1(int chart) const {
    RatFunc ell = H.curve().log_vector_factor(chart);
    Mat2R phi = Mat2R::diag(H.component1().frame(chart), H.component2().frame(chart));
    Mat2R out = phi * conn[chart] * phi.inverse();
    for (int i = 0; i < 2; ++i) {
        const RatFunc& f = phi.at(i, i);
        out.at(i, i) = out.at(i, i) - ell * f.derivative() / f;
    }
    return out;
}

bool FlatBundle::connection_chart_compatible() const {
    const MarkedProjLine& X = H.curve();
    LineBundleF w = omega_log(X);
    RatFunc van = RatFunc::of(X.vanishing_poly());
    for (int a = 0; a < X.num_charts(); ++a)
        for (int b = a + 1; b < X.num_charts(); ++b) {
            // dt-coefficients: Omega_a = conn_a * w_a with w_a = (frame_a / Pi) dt
            Mat2R t = H.chart_transition(a, b);
            Mat2R tinv = t.inverse();
            RatFunc wa = w.frame(a) / van;
            RatFunc wb = w.frame(b) / van;
            Mat2R dT(X.ctx());
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) dT.at(i, j) = t.at(i, j).derivative();
            Mat2R lhs = tinv * dT + (tinv * conn[a] * t).scale(wa);
            Mat2R rhs = conn[b].scale(wb);
            if (!(lhs == rhs)) return false;
        }
    return true;
}

Mat residue(const FlatBundle& Hf, int chart) {
    const MarkedProjLine& X = Hf.H.curve();
    const FqCtx& ctx = X.ctx();
    Mat r(ctx, 2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const RatFunc& f = Hf.conn[chart].at(i, j);
            if (f.is_zero()) continue;
            r.at(i, j) = X.chart_is_finite(chart) ? f.eval(X.chart_point(chart)) : f.eval_at_infinity();
        }
    return r;
}

std::vector<Mat2R> p_curvature(const FlatBundle& Hf) {
    const MarkedProjLine& X = Hf.H.curve();
    const FqCtx& ctx = X.ctx();
    int p = ctx.p();
    std::vector<Mat2R> psi;
    for (int chart = 0; chart < X.num_charts(); ++chart) {
        RatFunc ell = X.log_vector_factor(chart);
        const Mat2R& B = Hf.conn[chart];
        Mat2R out(ctx);
        for (int col = 0; col < 2; ++col) {
            std::array<RatFunc, 2> v = {RatFunc(ctx), RatFunc(ctx)};
            v[col] = RatFunc::constant(Fq::one(ctx));
            std::array<RatFunc, 2> start = v;
            for (int it = 0; it < p; ++it) {
                std::array<RatFunc, 2> bv = B.apply(v);
                v = {ell * v[0].derivative() + bv[0], ell * v[1].derivative() + bv[1]};
            }
            std::array<RatFunc, 2> bstart = B.apply(start);
            out.at(0, col) = v[0] - bstart[0];
            out.at(1, col) = v[1] - bstart[1];
        }
        psi.push_back(out);
    }
    LineBundleF w = omega_log(X);
    for (int a = 0; a < X.num_charts(); ++a)
        for (int b = a + 1; b < X.num_charts(); ++b) {
            Mat2R t = Hf.H.chart_transition(a, b);
            RatFunc q = (w.frame(a) / w.frame(b)).pow(p);
            Mat2R expected = (t.inverse() * psi[a] * t).scale(q);
            if (!(expected == psi[b]))
                throw ChartIncompatibleError("p-curvature charts disagree: internal convention bug");
        }
    return psi;
}

bool p_curvature_nowhere_zero(const FlatBundle& Hf) {
    const MarkedProjLine& X = Hf.H.curve();
    std::vector<Mat2R> psi = p_curvature(Hf);
    for (int chart = 0; chart < X.num_charts(); ++chart) {
        const Mat2R& m = psi[chart];
        Poly common = Poly::constant(Fq::one(X.ctx()));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (!m.at(i, j).is_zero()) common = common * m.at(i, j).den();
        std::optional<Poly> g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                if (m.at(i, j).is_zero()) continue;
                Poly numer = m.at(i, j).num() * common.divide_exact(m.at(i, j).den());
                g = g ? poly_gcd(*g, numer) : numer.monic();
            }
        if (!g) return false;  // psi identically zero on a chart
        Poly reduced = *g;
        for (int pt = 0; pt < X.num_charts() - 1; ++pt) {
            if (X.chart_is_finite(chart) && pt == chart) continue;
            int mult = reduced.root_multiplicity(X.chart_point(pt));
            if (mult) reduced = reduced.divide_exact(Poly::linear(X.chart_point(pt)).pow(mult));
        }
        if (reduced.degree() > 0) return false;
        if (!X.chart_is_finite(chart)) {
            bool all_vanish = true;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    if (m.at(i, j).is_zero()) continue;
                    if (m.at(i, j).order_at_infinity() <= 0) all_vanish = false;
                }
            if (all_vanish) return false;
        }
    }
    return true;
}

GradeResult grade(const FlatBundle& Hf, const RankTwoSection& fil) {
    const MarkedProjLine& X = Hf.H.curve();
    const FqCtx& ctx = X.ctx();
    int dF = -fil.twist;
    int dQ = Hf.H.det_degree() - dF;
    LineBundleF om = omega_log(X);
    std::optional<RatFunc> S;
    for (int chart = 0; chart < X.num_charts(); ++chart) {
        Mat2R c1 = Hf.conn1(chart);
        RatFunc ell = X.log_vector_factor(chart);
        std::array<RatFunc, 2> iota = fil.comp[chart];
        std::array<RatFunc, 2> bi = c1.apply(iota);
        std::array<RatFunc, 2> d_iota = {ell * iota[0].derivative() + bi[0],
                                         ell * iota[1].derivative() + bi[1]};
        // quotient coordinate via the wedge into det H, so theta-bar lands in
        // Hom(Fil, det (x) Fil^{-1} (x) omega) with "1"-coefficient:
        RatFunc wedge = iota[0] * d_iota[1] - iota[1] * d_iota[0];
        RatFunc S_chart = wedge * om.frame(chart);
        if (!S) S = S_chart;
        else if (!(*S == S_chart)) throw ChartIncompatibleError("graded theta disagrees between charts");
    }
    GradeResult out{GradedHiggs(X, dF, dQ, Poly(ctx)), false};
    if (S->is_zero()) {
        out.filtration_flat = true;
        return out;
    }
    if (S->den().degree() != 0) throw std::logic_error("graded theta is not polynomial");
    Poly Sp = S->num() * S->den().coeff(0).inverse();
    out.graded = GradedHiggs(X, dF, dQ, Sp);
    return out;
}

bool higgs_iso_test(const GradedHiggs& a, const GradedHiggs& b) {
    if (a.X != b.X) return false;
    bool zero_a = a.theta.is_zero(), zero_b = b.theta.is_zero();
    bool degrees_match = (a.up_deg == b.up_deg && a.down_deg == b.down_deg);
    bool degrees_swapped = (a.up_deg == b.down_deg && a.down_deg == b.up_deg);
    if (zero_a != zero_b) return false;
    if (zero_a) return degrees_match || degrees_swapped;
    if (!degrees_match) return false;
    const Poly &s = a.theta, &t = b.theta;
    if (s.degree() != t.degree()) return false;
    Fq ratio = t.leading() / s.leading();
    return t == s * ratio;
}

}  // namespace hdrflow
