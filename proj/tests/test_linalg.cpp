#include "doctest.h"
#include "hdrflow/linalg.hpp"

#include <random>

using namespace hdrflow;

TEST_CASE("solve_linear stated examples") {
    const FqCtx& F5 = FqCtx::get(5, 1);
    // identity map, target v -> {v}
    SemilinearMap id(Mat::identity(F5, 3), 0);
    Vec v = {Fq(F5, 1), Fq(F5, 2), Fq(F5, 3)};
    auto sol = id.solve(v);
    REQUIRE(sol);
    CHECK(sol->particular == v);
    CHECK(sol->kernel.empty());
    // zero map, target 0 -> full space
    SemilinearMap zero(Mat(F5, 3, 3), 0);
    auto sol2 = zero.solve(Vec(3, Fq::zero(F5)));
    REQUIRE(sol2);
    CHECK(sol2->kernel.size() == 3);
    CHECK_FALSE(zero.solve(v).has_value());
}

TEST_CASE("sigma-twisted solve on F_9 over F_3") {
    const FqCtx& F9 = FqCtx::get(3, 2);
    // x -> x^3 on F_9 viewed over F_3, target 1: unique solution 1, kernel 0
    Mat m = Mat::identity(F9, 1);
    SemilinearMap frob(m, 1);
    auto sol = frob.solve({Fq::one(F9)});
    REQUIRE(sol);
    CHECK(sol->prime_field_structure);
    CHECK(sol->kernel.empty());
    CHECK(sol->particular.size() == 1);
    CHECK(sol->particular[0] == Fq::one(F9));
    // exhaustive oracle over F_9
    int count = 0;
    for (const auto& x : all_elements(F9))
        if (x.frobenius() == Fq::one(F9)) ++count;
    CHECK(count == 1);
}

TEST_CASE("rank kernel image and rank-nullity") {
    const FqCtx& F7 = FqCtx::get(7, 1);
    std::mt19937 rng(5);
    for (int iter = 0; iter < 20; ++iter) {
        int rows = 2 + int(rng() % 4), cols = 2 + int(rng() % 4);
        Mat m(F7, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = Fq(F7, static_cast<long>(rng() % 7));
        SemilinearMap f(m, 0);
        auto rd = f.rank_kernel_image();
        CHECK(rd.rank + static_cast<int>(rd.kernel.size()) == cols);
        CHECK(static_cast<int>(rd.image.size()) == rd.rank);
        for (const auto& k : rd.kernel) CHECK(vec_is_zero(f.apply(k)));
    }
    // zero matrix and invertible diagonal
    SemilinearMap z(Mat(F7, 4, 4), 0);
    CHECK(z.rank_kernel_image().rank == 0);
    CHECK(z.rank_kernel_image().kernel.size() == 4);
    Mat d = Mat::identity(F7, 4);
    d.at(2, 2) = Fq(F7, 3);
    CHECK(SemilinearMap(d, 0).rank() == 4);
}

TEST_CASE("semilinear composition: twists add, ranks bounded") {
    const FqCtx& F9 = FqCtx::get(3, 2);
    std::mt19937 rng(17);
    auto rnd = [&](int n) {
        Mat m(F9, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m.at(i, j) = Fq::from_coeffs(F9, {int(rng() % 3), int(rng() % 3)});
        return m;
    };
    for (int iter = 0; iter < 10; ++iter) {
        SemilinearMap f(rnd(3), 1), g(rnd(3), 1);
        SemilinearMap fg = f.compose(g);
        CHECK(fg.twist() == 2);
        // pointwise agreement
        for (int trial = 0; trial < 5; ++trial) {
            Vec v;
            for (int i = 0; i < 3; ++i) v.push_back(Fq::from_coeffs(F9, {int(rng() % 3), int(rng() % 3)}));
            CHECK(fg.apply(v) == f.apply(g.apply(v)));
        }
        CHECK(fg.rank() <= std::min(f.rank(), g.rank()));
    }
}

TEST_CASE("kernel of twisted map is an F_p structure") {
    const FqCtx& F9 = FqCtx::get(3, 2);
    // map x -> c * sigma(x) with c = gen: kernel trivial; map (x,y) -> (sigma x, 0)
    Mat m(F9, 2, 2);
    m.at(0, 0) = Fq::one(F9);
    SemilinearMap f(m, 1);
    auto rd = f.rank_kernel_image();
    CHECK(rd.prime_field_structure);
    // kernel = {(0, y)}: over F_p structure it has 2 basis vectors (y, y*x)
    CHECK(rd.kernel.size() == 2);
    for (const auto& k : rd.kernel) CHECK(vec_is_zero(f.apply(k)));
}
