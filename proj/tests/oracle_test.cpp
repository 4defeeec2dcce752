#include <doctest.h>

#include "dpk/error.hpp"
#include "dpk/oracle.hpp"
#include "test_util.hpp"

using namespace dpk;

TEST_CASE("oracle examples") {
    const DpkInstance a2(Vector{3, 3}, Matrix(2, 1, {1, 1}));
    const InstanceStats s = validate(a2);
    REQUIRE(s.psi_floor == 1);
    const OracleResult o = brute_force(a2, s);
    CHECK(o.f_star == 2.0);
    CHECK(o.minimizers == std::vector<IntVector>{{0, 1}, {1, 0}, {1, 1}});
    CHECK(o.vectors_scanned == 4);

    const DpkInstance diag(Vector{4, 9}, Matrix(2, 1));
    const OracleResult d = brute_force(diag, validate(diag));
    CHECK(d.f_star == 4.0);
    CHECK(d.minimizers == std::vector<IntVector>{{1, 0}});

    const DpkInstance one(Vector{5}, Matrix(1, 1, {1}));
    const OracleResult u = brute_force(one, validate(one));
    CHECK(u.f_star == 4.0);
    CHECK(u.minimizers == std::vector<IntVector>{{1}});
}

TEST_CASE("oracle budget guard") {
    const DpkInstance inst = random_instance(20, 1, 3);
    try {
        brute_force(inst, validate(inst));
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.required() >= 3486784401.0);  // 3^20
    }
    CHECK_THROWS_AS(brute_force_box(random_instance(3, 1, 1), 2, 124), BudgetExceeded);
    CHECK_NOTHROW(brute_force_box(random_instance(3, 1, 1), 2, 125));
}

TEST_CASE("oracle minimum is stable beyond the guaranteed radius") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const DpkInstance inst = random_instance(2 + seed % 4, 1 + seed % 2, seed);
        const InstanceStats s = validate(inst);
        const OracleResult small = brute_force_box(inst, s.psi_floor);
        const OracleResult large = brute_force_box(inst, s.psi_floor + 1);
        CHECK(large.f_star <= small.f_star);
        CHECK(large.f_star == small.f_star);
        const Matrix G = gram(inst);
        for (const auto& a : small.minimizers) CHECK(testing::rel_close(quadratic_form(G, a), small.f_star, 1e-12));
    }
}

TEST_CASE("ball enumeration agrees with the box on the guaranteed radius") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const DpkInstance inst = random_instance(2 + seed % 4, 1 + seed % 2, 200 + seed);
        const InstanceStats s = validate(inst);
        const OracleResult box = brute_force(inst, s);
        const OracleResult ball = brute_force_ball(inst, s.psi * s.psi);
        CHECK(ball.f_star == box.f_star);
        CHECK(ball.minimizers == box.minimizers);
        CHECK(ball.vectors_scanned <= box.vectors_scanned);
    }
    // Radius-1 ball in 3 dimensions: the three canonical unit vectors.
    const DpkInstance diag(Vector{4, 2, 9}, Matrix(3, 1));
    const OracleResult r = brute_force_ball(diag, 1.0);
    CHECK(r.vectors_scanned == 3);
    CHECK(r.minimizers == std::vector<IntVector>{{0, 1, 0}});
    CHECK_THROWS_AS(brute_force_ball(random_instance(6, 1, 1), 9.0, 10), BudgetExceeded);
}
