#include <doctest.h>

#include <cmath>
#include <random>

#include "dpk/error.hpp"
#include "dpk/lattice.hpp"
#include "test_util.hpp"

using namespace dpk;

namespace {

DpkInstance rank_one(Vector d, Vector v) {
    const std::size_t n = d.size();
    return DpkInstance(std::move(d), Matrix(n, 1, std::move(v)));
}

}  // namespace

TEST_CASE("instance structural invariants") {
    CHECK_THROWS_AS(DpkInstance(Vector{}, Matrix(1, 1)), InvalidArgument);
    CHECK_THROWS_AS(DpkInstance(Vector{1.0, 1.0}, Matrix(3, 1)), InvalidArgument);
    CHECK_THROWS_AS(DpkInstance(Vector{1.0}, Matrix(1, 2)), InvalidArgument);
    CHECK_THROWS_AS(DpkInstance(Vector{INFINITY}, Matrix(1, 1)), InvalidArgument);
}

TEST_CASE("gram examples") {
    CHECK(gram(rank_one({3, 3}, {1, 1})) == Matrix::from_rows({{2, -1}, {-1, 2}}));
    CHECK(gram(rank_one({1, 2, 3}, {0, 0, 0})) == Matrix::from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}}));
    CHECK(gram(rank_one({3, 3, 3}, {1, 1, 1})) == Matrix::from_rows({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}));
    const DpkInstance r = random_instance(6, 3, 99);
    CHECK(gram(r).is_symmetric());
}

TEST_CASE("validate examples") {
    const InstanceStats a2 = validate(rank_one({3, 3}, {1, 1}), 1e-9);
    CHECK(a2.g_min == 2.0);
    CHECK(a2.lambda_lb <= 1.0);
    CHECK(a2.lambda_lb >= 1.0 - 1e-9);
    CHECK(a2.psi == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    CHECK(a2.psi_ceil == 2);
    CHECK(a2.psi_floor == 1);

    const InstanceStats diag = validate(rank_one({1, 2, 3}, {0, 0, 0}), 1e-9);
    CHECK(diag.g_min == 1.0);
    CHECK(diag.lambda_lb == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(diag.psi == doctest::Approx(1.0).epsilon(1e-8));
    // psi lands within round-off above 1; the guard keeps the shell count honest.
    CHECK(diag.psi_ceil <= 2);
    CHECK(diag.psi_floor == 1);

    CHECK_THROWS_AS(validate(rank_one({1, 1}, {1, 0})), NotPositiveDefinite);
    CHECK_THROWS_AS(validate(rank_one({1, -1}, {0, 0})), InvalidArgument);
    CHECK_THROWS_AS(validate(rank_one({0, 1}, {0, 0})), InvalidArgument);
}

TEST_CASE("validate is scale consistent") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const DpkInstance inst = random_instance(2 + seed % 6, 1 + seed % 2, seed);
        const double c = 0.25 + static_cast<double>(seed % 7);
        Vector d = inst.d();
        for (auto& x : d) x *= c;
        std::vector<double> v(inst.V().entries().begin(), inst.V().entries().end());
        for (auto& x : v) x *= std::sqrt(c);
        const DpkInstance scaled(d, Matrix(inst.n(), inst.k(), v));
        const InstanceStats s0 = validate(inst);
        const InstanceStats s1 = validate(scaled);
        CHECK(s1.g_min == doctest::Approx(c * s0.g_min).epsilon(1e-12));
        CHECK(s1.lambda_lb == doctest::Approx(c * s0.lambda_lb).epsilon(2e-9));
        CHECK(s1.psi == doctest::Approx(s0.psi).epsilon(2e-9));
    }
}

TEST_CASE("candf_instance examples") {
    const DpkInstance a = candf_instance(Vector{1, 1}, 1.0);
    CHECK(a.d() == Vector{3, 3});
    CHECK(a.V() == Matrix(2, 1, {1, 1}));
    CHECK(gram(a) == Matrix::from_rows({{2, -1}, {-1, 2}}));
    const InstanceStats s = validate(a, 1e-9);
    CHECK(s.lambda_lb <= 1.0);
    CHECK(s.lambda_lb >= 1.0 - 1e-9);
    CHECK(s.psi * s.psi <= 3.0);

    // sqrt(5)^2 is 5 only up to round-off.
    const Matrix axis = gram(candf_instance(Vector{1, 0}, 5.0));
    CHECK(axis(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(axis(1, 1) == 6.0);
    CHECK(axis(0, 1) == 0.0);
    CHECK(axis(1, 0) == 0.0);

    CHECK_THROWS_AS(candf_instance(Vector{1, 1}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(candf_instance(Vector{1, 1}, -2.0), InvalidArgument);
    CHECK_THROWS_AS(candf_instance(Vector{0, 0}, 1.0), InvalidArgument);
    CHECK(channel_gains_bounded(Vector{1.0, -1.0, 0.2}));
    CHECK_FALSE(channel_gains_bounded(Vector{1.5, 0.0}));
}

TEST_CASE("candf quadratic form identity and unit smallest eigenvalue") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> gain(-1.0, 1.0);
    const double powers[] = {0.1, 1.0, 10.0};
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + trial % 9;
        Vector h(n);
        for (auto& x : h) x = gain(rng);
        const double P = powers[trial % 3];
        const DpkInstance inst = candf_instance(h, P);
        const Matrix G = gram(inst);
        double norm2 = 0.0;
        for (double x : h) norm2 += x * x;
        for (int rep = 0; rep < 5; ++rep) {
            const IntVector a = testing::random_int_vector(n, 3, rng);
            double dot = 0.0, a2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                dot += h[i] * static_cast<double>(a[i]);
                a2 += static_cast<double>(a[i] * a[i]);
            }
            const double expected = (1.0 + P * norm2) * a2 - P * dot * dot;
            CHECK(testing::rel_close(quadratic_form(G, a), expected, 1e-9 * (1.0 + P * norm2) * (1.0 + a2)));
        }
        const double tol = 1e-9;
        const InstanceStats s = validate(inst, tol);
        CHECK(s.lambda_lb <= 1.0);
        CHECK(1.0 <= s.lambda_lb / (1.0 - tol));
        CHECK(s.psi * s.psi <= 1.0 + static_cast<double>(n) * P + 1e-6);
    }
}

TEST_CASE("random_instance is valid and deterministic") {
    for (std::size_t n = 1; n <= 7; ++n) {
        for (std::size_t k = 1; k <= n; ++k) {
            const DpkInstance a = random_instance(n, k, 1000 + n * 10 + k);
            CHECK(a.n() == n);
            CHECK(a.k() == k);
            CHECK_NOTHROW(validate(a));
            for (double x : a.d()) {
                CHECK(x >= 1.0);
                CHECK(x <= 10.0);
            }
            CHECK(a == random_instance(n, k, 1000 + n * 10 + k));
        }
    }
    CHECK(random_instance(4, 2, 1) != random_instance(4, 2, 2));
    CHECK(random_instance(5, 5, 7, 0.5).k() == 5);
    CHECK_THROWS_AS(random_instance(3, 4, 1), InvalidArgument);
    CHECK_THROWS_AS(random_instance(3, 0, 1), InvalidArgument);
    CHECK_THROWS_AS(random_instance(3, 1, 1, 1.5), InvalidArgument);
}
