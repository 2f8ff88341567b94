#include "hdrflow/linalg.hpp"

#include <algorithm>

namespace hdrflow {

Mat::Mat(const FqCtx& ctx, int rows, int cols)
    : ctx_(&ctx), rows_(rows), cols_(cols), a_(size_t(rows) * cols, Fq::zero(ctx)) {}

Mat Mat::identity(const FqCtx& ctx, int n) {
    Mat m(ctx, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Fq::one(ctx);
    return m;
}

Mat Mat::from_columns(const FqCtx& ctx, int rows, const std::vector<Vec>& cols) {
    Mat m(ctx, rows, static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) {
        if (static_cast<int>(cols[c].size()) != rows) throw std::invalid_argument("column size mismatch");
        for (int r = 0; r < rows; ++r) m.at(r, static_cast<int>(c)) = cols[c][r];
    }
    return m;
}

Mat Mat::from_rows(const FqCtx& ctx, int cols, const std::vector<Vec>& rows) {
    Mat m(ctx, static_cast<int>(rows.size()), cols);
    for (size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(rows[r].size()) != cols) throw std::invalid_argument("row size mismatch");
        for (int c = 0; c < cols; ++c) m.at(static_cast<int>(r), c) = rows[r][c];
    }
    return m;
}

Vec Mat::column(int c) const {
    Vec v;
    v.reserve(rows_);
    for (int r = 0; r < rows_; ++r) v.push_back(at(r, c));
    return v;
}

Vec Mat::row(int r) const {
    Vec v;
    v.reserve(cols_);
    for (int c = 0; c < cols_; ++c) v.push_back(at(r, c));
    return v;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix dimension mismatch");
    Mat r(*ctx_, rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Fq& x = at(i, k);
            if (x.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) r.at(i, j) = r.at(i, j) + x * o.at(k, j);
        }
    return r;
}

Vec Mat::apply(const Vec& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("vector dimension mismatch");
    Vec r(rows_, Fq::zero(*ctx_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (!at(i, j).is_zero()) r[i] = r[i] + at(i, j) * v[j];
    return r;
}

Mat Mat::transpose() const {
    Mat r(*ctx_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

Mat Mat::frobenius(int e) const {
    Mat r(*ctx_, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j).frobenius(e);
    return r;
}

std::vector<int> rref_inplace(std::vector<Vec>& rows) {
    std::vector<int> pivots;
    if (rows.empty()) return pivots;
    size_t ncols = rows[0].size();
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < rows.size(); ++c) {
        size_t sel = r;
        while (sel < rows.size() && rows[sel][c].is_zero()) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        Fq inv = rows[r][c].inverse();
        for (auto& x : rows[r]) x = x * inv;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            Fq f = rows[i][c];
            for (size_t j = 0; j < ncols; ++j) rows[i][j] = rows[i][j] - f * rows[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    rows.resize(r);
    return pivots;
}

int Mat::rank() const {
    std::vector<Vec> rows;
    rows.reserve(rows_);
    for (int r = 0; r < rows_; ++r) rows.push_back(row(r));
    return static_cast<int>(rref_inplace(rows).size());
}

std::vector<Vec> Mat::kernel_basis() const {
    std::vector<Vec> rows;
    rows.reserve(rows_);
    for (int r = 0; r < rows_; ++r) rows.push_back(row(r));
    std::vector<int> pivots = rref_inplace(rows);
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<Vec> ker;
    for (int c = 0; c < cols_; ++c) {
        if (is_pivot[c]) continue;
        Vec v(cols_, Fq::zero(*ctx_));
        v[c] = Fq::one(*ctx_);
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -rows[i][c];
        ker.push_back(std::move(v));
    }
    return ker;
}

std::vector<Vec> Mat::image_basis() const {
    std::vector<Vec> cols;
    cols.reserve(cols_);
    for (int c = 0; c < cols_; ++c) cols.push_back(column(c));
    return rref_basis(cols);
}

std::optional<Vec> Mat::solve(const Vec& b) const {
    if (static_cast<int>(b.size()) != rows_) throw std::invalid_argument("rhs dimension mismatch");
    std::vector<Vec> rows;
    rows.reserve(rows_);
    for (int r = 0; r < rows_; ++r) {
        Vec v = row(r);
        v.push_back(b[r]);
        rows.push_back(std::move(v));
    }
    std::vector<int> pivots = rref_inplace(rows);
    Vec x(cols_, Fq::zero(*ctx_));
    for (size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == cols_) return std::nullopt;  // 0 = 1 row
        x[pivots[i]] = rows[i][cols_];
    }
    return x;
}

Vec vec_add(const Vec& a, const Vec& b) {
    Vec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] + b[i];
    return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
    Vec r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] = r[i] - b[i];
    return r;
}

Vec vec_scale(const Vec& a, const Fq& s) {
    Vec r = a;
    for (auto& x : r) x = x * s;
    return r;
}

bool vec_is_zero(const Vec& a) {
    for (const auto& x : a)
        if (!x.is_zero()) return false;
    return true;
}

Vec vec_frobenius(const Vec& a, int e) {
    Vec r = a;
    for (auto& x : r) x = x.frobenius(e);
    return r;
}

std::vector<Vec> rref_basis(const std::vector<Vec>& vectors) {
    std::vector<Vec> rows = vectors;
    rref_inplace(rows);
    return rows;
}

int subspace_rank(const std::vector<Vec>& vectors) {
    std::vector<Vec> rows = vectors;
    return static_cast<int>(rref_inplace(rows).size());
}

bool in_span(const std::vector<Vec>& basis, const Vec& v) {
    std::vector<Vec> rows = basis;
    int r0 = static_cast<int>(rref_inplace(rows).size());
    rows.push_back(v);
    return static_cast<int>(rref_inplace(rows).size()) == r0;
}

SemilinearMap::SemilinearMap(Mat m, int twist) : m_(std::move(m)), twist_(twist) {
    if (twist < 0) throw std::invalid_argument("twist must be nonnegative");
}

Vec SemilinearMap::apply(const Vec& v) const { return m_.apply(vec_frobenius(v, twist_)); }

SemilinearMap SemilinearMap::compose(const SemilinearMap& inner) const {
    // x -> M1 sigma^{e1}(M2 sigma^{e2} x) = (M1 sigma^{e1}(M2)) sigma^{e1+e2}(x)
    Mat m = m_ * inner.m_.frobenius(twist_);
    return SemilinearMap(std::move(m), twist_ + inner.twist_);
}

namespace {

// F_p-matrix of v -> M sigma^e(v) under restriction of scalars. Coordinates:
// component i, basis coefficient j -> index i*m + j.
Mat restrict_scalars(const Mat& m, int twist) {
    const FqCtx& ctx = m.ctx();
    const FqCtx& fp = FqCtx::get(ctx.p(), 1);
    int em = ctx.m();
    Mat big(fp, m.rows() * em, m.cols() * em);
    for (int j = 0; j < m.cols(); ++j)
        for (int b = 0; b < em; ++b) {
            // image of basis vector e_j * x^b
            Vec v(m.cols(), Fq::zero(ctx));
            std::vector<int> coeffs(em, 0);
            coeffs[b] = 1;
            v[j] = Fq::from_coeffs(ctx, coeffs);
            Vec w = m.apply(vec_frobenius(v, twist));
            for (int i = 0; i < m.rows(); ++i)
                for (int a = 0; a < em; ++a) big.at(i * em + a, j * em + b) = Fq(fp, w[i].coeff(a));
        }
    return big;
}

Vec flatten(const Vec& v, const FqCtx& fp) {
    int em = v.empty() ? 1 : v[0].ctx().m();
    Vec out;
    out.reserve(v.size() * em);
    for (const auto& x : v)
        for (int a = 0; a < em; ++a) out.emplace_back(fp, x.coeff(a));
    return out;
}

Vec unflatten(const Vec& v, const FqCtx& ctx) {
    int em = ctx.m();
    Vec out;
    out.reserve(v.size() / em);
    for (size_t i = 0; i < v.size(); i += em) {
        std::vector<int> coeffs(em, 0);
        for (int a = 0; a < em; ++a) coeffs[a] = static_cast<int>(v[i + a].coeff(0));
        out.push_back(Fq::from_coeffs(ctx, coeffs));
    }
    return out;
}

}  // namespace

int SemilinearMap::rank() const {
    // sigma is bijective, so the F_q-rank of the matrix is the rank of the map
    return m_.rank();
}

std::optional<SemilinearMap::Solution> SemilinearMap::solve(const Vec& target) const {
    const FqCtx& ctx = m_.ctx();
    if (twist_ % ctx.m() == 0) {
        // plain linear solve
        auto x = m_.solve(target);
        if (!x) return std::nullopt;
        Solution s;
        // undo sigma^twist on the unknown: M sigma^e(y) = b solved via x = sigma^e(y)
        s.particular = vec_frobenius(*x, ctx.m() - twist_ % ctx.m());
        for (auto& k : m_.kernel_basis()) s.kernel.push_back(vec_frobenius(k, ctx.m() - twist_ % ctx.m()));
        s.prime_field_structure = false;
        return s;
    }
    const FqCtx& fp = FqCtx::get(ctx.p(), 1);
    Mat big = restrict_scalars(m_, twist_);
    auto x = big.solve(flatten(target, fp));
    if (!x) return std::nullopt;
    Solution s;
    s.particular = unflatten(*x, ctx);
    for (auto& k : big.kernel_basis()) s.kernel.push_back(unflatten(k, ctx));
    s.prime_field_structure = true;
    return s;
}

SemilinearMap::RankData SemilinearMap::rank_kernel_image() const {
    const FqCtx& ctx = m_.ctx();
    RankData rd{0, {}, {}, false};
    rd.rank = m_.rank();
    rd.image = m_.image_basis();
    if (twist_ % ctx.m() == 0) {
        for (auto& k : m_.kernel_basis()) rd.kernel.push_back(vec_frobenius(k, ctx.m() - twist_ % ctx.m()));
    } else {
        Mat big = restrict_scalars(m_, twist_);
        for (auto& k : big.kernel_basis()) rd.kernel.push_back(unflatten(k, ctx));
        rd.prime_field_structure = true;
    }
    return rd;
}

}  // namespace hdrflow
