#pragma once

#include <optional>
#include <vector>

#include "hdrflow/field.hpp"

namespace hdrflow {

using Vec = std::vector<Fq>;

// Dense matrix over F_q, row major.
class Mat {
  public:
    Mat(const FqCtx& ctx, int rows, int cols);
    static Mat identity(const FqCtx& ctx, int n);
    static Mat from_columns(const FqCtx& ctx, int rows, const std::vector<Vec>& cols);
    static Mat from_rows(const FqCtx& ctx, int cols, const std::vector<Vec>& rows);

    const FqCtx& ctx() const { return *ctx_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Fq& at(int r, int c) { return a_[size_t(r) * cols_ + c]; }
    const Fq& at(int r, int c) const { return a_[size_t(r) * cols_ + c]; }
    Vec column(int c) const;
    Vec row(int r) const;

    Mat operator*(const Mat& o) const;
    Vec apply(const Vec& v) const;
    Mat transpose() const;
    // coefficientwise sigma^e
    Mat frobenius(int e) const;

    int rank() const;
    std::vector<Vec> kernel_basis() const;
    std::vector<Vec> image_basis() const;
    // one solution of Ax = b, or nullopt
    std::optional<Vec> solve(const Vec& b) const;

  private:
    const FqCtx* ctx_;
    int rows_, cols_;
    std::vector<Fq> a_;
};

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Vec& a, const Fq& s);
bool vec_is_zero(const Vec& a);
Vec vec_frobenius(const Vec& a, int e);

// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref_inplace(std::vector<Vec>& rows);

// Deterministic normalization of a subspace: RREF basis, rows ordered by pivot.
std::vector<Vec> rref_basis(const std::vector<Vec>& vectors);
int subspace_rank(const std::vector<Vec>& vectors);
bool in_span(const std::vector<Vec>& basis, const Vec& v);

// sigma^twist-semilinear map v -> M sigma^twist(v). Kernel and solution sets
// for twist > 0 are F_p-subspaces; they are computed by restriction of
// scalars to F_p.
class SemilinearMap {
  public:
    SemilinearMap(Mat m, int twist);
    const Mat& matrix() const { return m_; }
    int twist() const { return twist_; }

    Vec apply(const Vec& v) const;
    SemilinearMap compose(const SemilinearMap& inner) const;  // this after inner
    int rank() const;

    struct Solution {
        Vec particular;
        std::vector<Vec> kernel;   // F_q-basis (twist 0) or F_p-basis (twist > 0)
        bool prime_field_structure = false;
    };
    // solutions of M sigma^e(x) = target, empty optional when inconsistent
    std::optional<Solution> solve(const Vec& target) const;

    struct RankData {
        int rank;
        std::vector<Vec> kernel;
        std::vector<Vec> image;
        bool prime_field_structure = false;
    };
    RankData rank_kernel_image() const;

  private:
    Mat m_;
    int twist_;
};

}  // namespace hdrflow
