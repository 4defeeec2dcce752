#include <doctest.h>

#include <cmath>
#include <limits>

#include "dpk/error.hpp"
#include "dpk/linalg.hpp"
#include "test_util.hpp"

using namespace dpk;

TEST_CASE("matrix rejects empty shapes and non-finite entries") {
    CHECK_THROWS_AS(Matrix(0, 3), InvalidArgument);
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), InvalidArgument);
    CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::numeric_limits<double>::quiet_NaN()}), InvalidArgument);
    CHECK_THROWS_AS(Matrix::from_rows({{1.0, 2.0}, {3.0}}), InvalidArgument);
}

TEST_CASE("quadratic_form examples") {
    const Matrix G = Matrix::from_rows({{2, -1}, {-1, 2}});
    CHECK(quadratic_form(G, IntVector{1, 1}) == 2.0);
    CHECK(quadratic_form(G, IntVector{1, 0}) == 2.0);
    CHECK(quadratic_form(G, IntVector{0, 0}) == 0.0);
    CHECK_THROWS_AS(quadratic_form(G, IntVector{1, 2, 3}), InvalidArgument);
}

TEST_CASE("quadratic_form is exactly even and bounded below by the smallest eigenvalue") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 7;
        const Matrix G = testing::random_spd(n, rng);
        const double lb = smallest_eigenvalue_lower_bound(G, 1e-9);
        IntVector a = testing::random_int_vector(n, 4, rng);
        IntVector neg = a;
        for (auto& x : neg) x = -x;
        const double f = quadratic_form(G, a);
        CHECK(f == quadratic_form(G, neg));
        double norm2 = 0.0;
        for (auto x : a) norm2 += static_cast<double>(x * x);
        CHECK(f >= lb * norm2 - 1e-9 * std::max(1.0, f));
    }
}

TEST_CASE("solve_square_system examples") {
    const auto x = solve_square_system(Matrix::identity(2), Vector{0.5, 1.5}, 1e-10);
    REQUIRE(x);
    CHECK(*x == Vector{0.5, 1.5});

    const Matrix rank_one = Matrix::from_rows({{1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3}});
    CHECK_FALSE(solve_square_system(rank_one, Vector{1.0, 2.0}));
    CHECK_FALSE(solve_square_system(rank_one, Vector{0.0, 0.0}, 1e-12));

    const auto y = solve_square_system(Matrix::from_rows({{1.0 / 3}}), Vector{0.5});
    REQUIRE(y);
    CHECK((*y)[0] == doctest::Approx(1.5).epsilon(1e-15));

    CHECK_THROWS_AS(solve_square_system(Matrix::identity(2), Vector{1.0}), InvalidArgument);
    CHECK_THROWS_AS(solve_square_system(Matrix(2, 3), Vector{1.0, 1.0}), InvalidArgument);
}

TEST_CASE("solve_square_system meets the residual bound") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t k = 1 + trial % 5;
        Matrix M(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) M(i, j) = normal(rng) * std::pow(10.0, (trial % 3) - 1);
        Vector c(k);
        for (auto& v : c) v = normal(rng);
        const double tol = default_rank_tol(M);
        const auto x = solve_square_system(M, c, tol);
        if (!x) continue;
        double res = 0.0, c_inf = 0.0, x_inf = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double s = -c[i];
            for (std::size_t j = 0; j < k; ++j) s += M(i, j) * (*x)[j];
            res = std::max(res, std::abs(s));
            c_inf = std::max(c_inf, std::abs(c[i]));
            x_inf = std::max(x_inf, std::abs((*x)[i]));
        }
        CHECK(res <= static_cast<double>(k) * tol * std::max({1.0, c_inf, M.max_abs() * x_inf}));
    }
}

TEST_CASE("smallest eigenvalue bound examples") {
    const double tol = 1e-6;
    const double id = smallest_eigenvalue_lower_bound(Matrix::identity(3), tol);
    CHECK(id <= 1.0);
    CHECK(id >= 1.0 - tol);

    // Characteristic polynomial (2 - t)^2 - 1 has roots 1 and 3.
    const double lb = smallest_eigenvalue_lower_bound(Matrix::from_rows({{2, -1}, {-1, 2}}), tol);
    CHECK(lb <= 1.0);
    CHECK(lb >= 1.0 - tol);

    // (1 + P|h|^2) I - P h h^T has smallest eigenvalue exactly 1.
    const double P = 2.5;
    const Vector h{0.3, -0.9, 0.5, 1.0};
    double norm2 = 0.0;
    for (double x : h) norm2 += x * x;
    Matrix G(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) G(i, j) = (i == j ? 1.0 + P * norm2 : 0.0) - P * h[i] * h[j];
    const double c = smallest_eigenvalue_lower_bound(G, tol);
    CHECK(c <= 1.0);
    CHECK(c >= 1.0 - tol);
}

TEST_CASE("smallest eigenvalue bound on diagonal matrices") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 9;
        Matrix G(n, n);
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            G(i, i) = u(rng);
            lo = std::min(lo, G(i, i));
        }
        const double lb = smallest_eigenvalue_lower_bound(G, 1e-8);
        CHECK(lb <= lo);
        CHECK(lb >= (1.0 - 1e-8) * lo);
    }
}

TEST_CASE("smallest eigenvalue bound against Jacobi rotations") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 8;
        const Matrix G = testing::random_spd(n, rng, 0.05);
        const double lambda = testing::jacobi_eigenvalues(G).front();
        const double lb = smallest_eigenvalue_lower_bound(G, 1e-7);
        CHECK(lb > 0.0);
        CHECK(lb <= lambda * (1.0 + 1e-12));
        CHECK(lb >= (1.0 - 1e-7) * lambda * (1.0 - 1e-12));
    }
}

TEST_CASE("smallest eigenvalue bound rejects indefinite and bad tolerances") {
    CHECK_THROWS_AS(smallest_eigenvalue_lower_bound(Matrix::from_rows({{1, 2}, {2, 1}}), 1e-6), NotPositiveDefinite);
    CHECK_THROWS_AS(smallest_eigenvalue_lower_bound(Matrix::from_rows({{0, 0}, {0, 1}}), 1e-6), NotPositiveDefinite);
    CHECK_THROWS_AS(smallest_eigenvalue_lower_bound(Matrix::from_rows({{1, 1}, {1, 1}}), 1e-6), NotPositiveDefinite);
    CHECK_THROWS_AS(smallest_eigenvalue_lower_bound(Matrix::identity(2), 0.0), InvalidArgument);
    CHECK_THROWS_AS(smallest_eigenvalue_lower_bound(Matrix::identity(2), 1.0), InvalidArgument);
}

TEST_CASE("inertia predicate matches the spectrum") {
    const Matrix G = Matrix::from_rows({{2, -1}, {-1, 2}});
    CHECK(shifted_is_positive_definite(G, 0.0));
    CHECK(shifted_is_positive_definite(G, 0.999));
    CHECK_FALSE(shifted_is_positive_definite(G, 1.001));
    CHECK_FALSE(shifted_is_positive_definite(G, 5.0));
}
