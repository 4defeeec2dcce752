#pragma once

#include <cstdint>
#include <limits>
#include <span>

#include "dpk/linalg.hpp"
#include "dpk/solver.hpp"

namespace dpk::detail {

// Running minimum under the precedes() order.
struct Incumbent {
    double f = std::numeric_limits<double>::infinity();
    IntVector a;
    std::uint64_t evaluated = 0;

    // Rounds b, drops zero, canonicalizes and keeps the better candidate.
    void offer_rounded(const Matrix& G, std::span<const double> b);
    void offer(const Matrix& G, IntVector a);
    void merge(const Incumbent& other);

private:
    // Reused rounding buffer and the previous rounded candidate; neighbouring
    // subsets often round to the same point, which then needs no re-evaluation.
    IntVector scratch_;
    IntVector last_;
};

void offer_unit_vectors(const Matrix& G, Incumbent& inc);

// Row i scaled by 1/d_i.
Matrix scaled_factor(std::span<const double> d, const Matrix& V);

// Vertex sets for factor W (n x r) over all r-row subsets.
BreakpointSet phase1_points(const Matrix& dinv_w, std::int64_t psi_ceil, double rank_tol_rel, double dedup_tol);

void phase2_run(const Matrix& G, const Matrix& dinv_w, const BreakpointSet& vertices, Phase2Mode mode,
                unsigned threads, Incumbent& inc);

}  // namespace dpk::detail
