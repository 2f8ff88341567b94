#include "hdrflow/cech.hpp"

#include <algorithm>

namespace hdrflow {

namespace {

// poles of f lie among the marked points listed (by curve chart index) plus infinity
bool poles_within(const MarkedProjLine& X, const RatFunc& f, const std::set<int>& allowed_curve_pts) {
    if (f.is_zero()) return true;
    Poly den = f.den();
    for (int c = 0; c < X.num_charts() - 1; ++c) {
        int mult = den.root_multiplicity(X.chart_point(c));
        if (mult == 0) continue;
        if (!allowed_curve_pts.count(c)) return false;
        den = den.divide_exact(Poly::linear(X.chart_point(c)).pow(mult));
    }
    return den.degree() == 0;
}

}  // namespace

Cover Cover::atlas(const MarkedProjLine& X) {
    Cover c;
    c.X = &X;
    for (int k = 0; k < X.num_charts(); ++k) {
        std::set<int> excl;
        for (int j = 0; j < X.num_charts(); ++j)
            if (j != k) excl.insert(j);
        c.excluded.push_back(std::move(excl));
    }
    c.validate();
    return c;
}

Cover Cover::two_chart(const MarkedProjLine& X) {
    Cover c;
    c.X = &X;
    c.excluded.push_back({X.infinity_chart()});
    c.excluded.push_back({0});  // curve chart 0 owns the marked point 0
    c.validate();
    return c;
}

int Cover::infinity_chart() const {
    int inf_pt = X->infinity_chart();
    int found = -1;
    for (int k = 0; k < num_charts(); ++k)
        if (!excluded[k].count(inf_pt)) {
            if (found >= 0) throw std::logic_error("cover has several charts containing infinity");
            found = k;
        }
    if (found < 0) throw std::logic_error("cover does not contain infinity");
    return found;
}

int Cover::chart_containing(int curve_chart_index) const {
    for (int k = 0; k < num_charts(); ++k)
        if (!excluded[k].count(curve_chart_index)) return k;
    throw std::logic_error("cover misses a marked point");
}

bool Cover::refines(const Cover& coarser) const {
    if (X != coarser.X) return false;
    for (const auto& mine : excluded) {
        bool ok = false;
        for (const auto& theirs : coarser.excluded) {
            // chart contained: my excluded set contains theirs
            if (std::includes(mine.begin(), mine.end(), theirs.begin(), theirs.end())) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

bool Cover::operator==(const Cover& o) const { return X == o.X && excluded == o.excluded; }

void Cover::validate() const {
    if (!X) throw std::logic_error("cover without curve");
    for (int pt = 0; pt < X->num_charts(); ++pt) {
        bool covered = false;
        for (const auto& e : excluded)
            if (!e.count(pt)) covered = true;
        if (!covered) throw std::invalid_argument("cover misses a marked point");
    }
    if (infinity_chart() != num_charts() - 1)
        throw std::invalid_argument("cover must list the chart containing infinity last");
    for (const auto& e : excluded)
        if (e.empty()) throw std::invalid_argument("cover chart must exclude at least one marked point");
}

CechClass::CechClass(const LineBundleF& bundle, Cover cover) : bundle_(bundle), cover_(std::move(cover)) {
    cover_.validate();
    if (cover_.X != &bundle.curve()) throw std::invalid_argument("cover/bundle curve mismatch");
}

CechClass CechClass::zero(const LineBundleF& bundle, const Cover& cover) { return CechClass(bundle, cover); }

CechClass CechClass::from_coords(const LineBundleF& bundle, const Cover& cover, const Vec& coords) {
    CechClass c(bundle, cover);
    const FqCtx& ctx = bundle.curve().ctx();
    RatFunc rep(ctx);
    for (size_t k = 0; k < coords.size(); ++k)
        rep = rep + RatFunc::t_power(ctx, -static_cast<int>(k) - 1) * coords[k];
    int inf = c.cover_.infinity_chart();
    for (int a = 0; a < c.cover_.num_charts() - 1; ++a) c.set_component(a, inf, rep);
    return c;
}

CechClass CechClass::basis_class(const LineBundleF& bundle, const Cover& cover, int j) {
    int n = h1_dim(bundle);
    if (j < 1 || j > n) throw std::out_of_range("basis class index");
    Vec coords(n, Fq::zero(bundle.curve().ctx()));
    coords[j - 1] = Fq::one(bundle.curve().ctx());
    return from_coords(bundle, cover, coords);
}

const RatFunc& CechClass::component(int i, int j) const {
    static thread_local std::map<const FqCtx*, RatFunc> zeros;
    if (i >= j) throw std::invalid_argument("component requires i < j");
    auto it = comp_.find({i, j});
    if (it != comp_.end()) return it->second;
    auto z = zeros.find(&curve().ctx());
    if (z == zeros.end()) z = zeros.emplace(&curve().ctx(), RatFunc(curve().ctx())).first;
    return z->second;
}

void CechClass::set_component(int i, int j, RatFunc value) {
    if (i >= j || j >= cover_.num_charts()) throw std::invalid_argument("bad component indices");
    if (value.is_zero()) comp_.erase({i, j});
    else comp_.insert_or_assign({i, j}, std::move(value));
}

bool CechClass::is_cocycle() const {
    const MarkedProjLine& X = curve();
    // pole support of each component
    for (const auto& [key, val] : comp_) {
        std::set<int> allowed = cover_.excluded[key.first];
        allowed.insert(cover_.excluded[key.second].begin(), cover_.excluded[key.second].end());
        if (!poles_within(X, val, allowed)) return false;
    }
    int n = cover_.num_charts();
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                RatFunc d = component(b, c) - component(a, c) + component(a, b);
                if (!d.is_zero()) return false;
            }
    return true;
}

Vec CechClass::canonical_coords() const {
    const MarkedProjLine& X = curve();
    const FqCtx& ctx = X.ctx();
    int n = h1_dim(bundle_);
    int inf = cover_.infinity_chart();
    RatFunc total(ctx);
    for (int pt = 0; pt < X.num_charts() - 1; ++pt) {
        int a = cover_.chart_containing(pt);
        if (a == inf) continue;  // component (inf, inf) vanishes
        total = total + polar_part_at(component(a, inf), X.chart_point(pt));
    }
    if (n == 0) {
        if (!total.is_zero()) {
            // still fine: class group is trivial, nothing to report
        }
        return Vec{};
    }
    return expansion_at_infinity(total, n);
}

CechClass CechClass::operator+(const CechClass& o) const {
    if (!(cover_ == o.cover_) || bundle_.degree() != o.bundle_.degree())
        throw std::invalid_argument("cochain addition mismatch");
    CechClass r = *this;
    for (const auto& [key, val] : o.comp_) r.set_component(key.first, key.second, r.component(key.first, key.second) + val);
    return r;
}

CechClass CechClass::operator-(const CechClass& o) const { return *this + o.scale(-Fq::one(curve().ctx())); }

CechClass CechClass::scale(const Fq& c) const {
    CechClass r(bundle_, cover_);
    for (const auto& [key, val] : comp_) r.set_component(key.first, key.second, val * c);
    return r;
}

CechClass CechClass::multiply_into(const LineBundleF& target, const RatFunc& morphism) const {
    CechClass r(target, cover_);
    for (const auto& [key, val] : comp_) r.set_component(key.first, key.second, val * morphism);
    return r;
}

CechClass CechClass::frobenius_pullback() const {
    CechClass r(bundle_.frobenius_pullback(), cover_);
    for (const auto& [key, val] : comp_) r.set_component(key.first, key.second, val.pth_power());
    return r;
}

CechClass CechClass::refine_to(const Cover& target) const {
    if (target.X != &curve()) throw std::invalid_argument("covers live on different curves");
    return from_coords(bundle_, target, canonical_coords());
}

std::optional<std::vector<RatFunc>> CechClass::coboundary_witness() const {
    const MarkedProjLine& X = curve();
    const FqCtx& ctx = X.ctx();
    Vec coords = canonical_coords();
    if (!vec_is_zero(coords)) return std::nullopt;
    int inf = cover_.infinity_chart();
    RatFunc M(ctx);
    for (int pt = 0; pt < X.num_charts() - 1; ++pt) {
        int a = cover_.chart_containing(pt);
        if (a == inf) continue;
        M = M + polar_part_at(component(a, inf), X.chart_point(pt));
    }
    std::vector<RatFunc> f;
    for (int a = 0; a < cover_.num_charts(); ++a) {
        if (a == inf) f.push_back(M);
        else f.push_back(M - component(a, inf));
    }
    return f;
}

std::vector<Poly> h0_basis(const LineBundleF& bundle) {
    std::vector<Poly> out;
    const FqCtx& ctx = bundle.curve().ctx();
    for (int i = 0; i <= bundle.degree(); ++i) out.push_back(Poly::t(ctx, i));
    return out;
}

int h0_dim(const LineBundleF& bundle) { return std::max(0, bundle.degree() + 1); }

std::vector<CechClass> h1_basis(const LineBundleF& bundle, const Cover& cover) {
    std::vector<CechClass> out;
    for (int j = 1; j <= h1_dim(bundle); ++j) out.push_back(CechClass::basis_class(bundle, cover, j));
    return out;
}

int h1_dim(const LineBundleF& bundle) { return std::max(0, -bundle.degree() - 1); }

FlatLine FlatLine::canonical_connection(const LineBundleF& b) {
    FlatLine m{b, {}};
    m.omega.assign(b.curve().num_charts(), RatFunc(b.curve().ctx()));
    return m;
}

CechClass connection_on_cochain(const FlatLine& M, const CechClass& c) {
    const MarkedProjLine& X = M.bundle.curve();
    LineBundleF target = M.bundle.tensor(omega_log(X));
    CechClass out(target, c.cover());
    int n = c.cover().num_charts();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const RatFunc& C = c.component(i, j);
            if (C.is_zero()) continue;
            // use the curve chart owned by... the connection data is per curve
            // chart; for the atlas these coincide with cover charts. For other
            // covers we differentiate against chart i's own log frame: pick the
            // curve chart of some marked point the cover chart i contains when
            // i is finite-type, else of chart j.
            int curve_chart;
            {
                const Cover& cov = c.cover();
                int pick = -1;
                for (int pt = 0; pt < X.num_charts(); ++pt)
                    if (cov.contains_curve_point(i, pt)) {
                        pick = pt;
                        break;
                    }
                curve_chart = pick;
            }
            const RatFunc& f = M.bundle.frame(curve_chart);
            RatFunc g = omega_log(X).frame(curve_chart);
            RatFunc ell = X.log_vector_factor(curve_chart);
            RatFunc u = C / f;
            RatFunc val = g * (ell * u.derivative() * f + C * M.omega[curve_chart]);
            out.set_component(i, j, val);
        }
    return out;
}

DeRhamH1 hypercoh_h1_dR(const FlatLine& M) {
    const MarkedProjLine& X = M.bundle.curve();
    const FqCtx& ctx = X.ctx();
    LineBundleF Mw = M.bundle.tensor(omega_log(X));
    DeRhamH1 out;

    // H^0 level: nabla on global sections, computed on chart 0's formula
    int h0m = h0_dim(M.bundle), h0w = h0_dim(Mw);
    int rank0 = 0;
    if (h0m > 0 && h0w > 0) {
        std::vector<Vec> rows;
        const RatFunc& f = M.bundle.frame(0);
        RatFunc g = omega_log(X).frame(0);
        RatFunc ell = X.log_vector_factor(0);
        for (const Poly& s : h0_basis(M.bundle)) {
            RatFunc u = RatFunc::of(s) / f;
            RatFunc val = g * (ell * u.derivative() * f + RatFunc::of(s) * M.omega[0]);
            if (!val.den().is_zero() && val.den().degree() != 0)
                throw std::logic_error("connection image of a global section is not global");
            Poly v = val.num() * val.den().coeff(0).inverse();
            Vec row(h0w, Fq::zero(ctx));
            for (int k = 0; k < h0w; ++k) row[k] = v.coeff(k);
            rows.push_back(std::move(row));
        }
        rank0 = subspace_rank(rows);
    } else if (h0m > 0 && h0w == 0) {
        rank0 = 0;
    }
    out.h0_coker_dim = h0w - rank0;

    // H^1 level: nabla on canonical classes
    int h1m = h1_dim(M.bundle), h1w = h1_dim(Mw);
    Cover cov = Cover::atlas(X);
    if (h1m > 0) {
        std::vector<Vec> cols;
        for (int j = 1; j <= h1m; ++j) {
            CechClass b = CechClass::basis_class(M.bundle, cov, j);
            CechClass db = connection_on_cochain(M, b);
            cols.push_back(db.canonical_coords());
        }
        Mat d1 = Mat::from_columns(ctx, h1w, cols);
        for (auto& k : d1.kernel_basis()) out.image_of_alpha.push_back(k);
    }
    out.alpha_injective = (out.h0_coker_dim == 0);
    out.dim = out.h0_coker_dim + static_cast<int>(out.image_of_alpha.size());
    return out;
}

}  // namespace hdrflow
