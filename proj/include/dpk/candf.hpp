#pragma once

#include <span>

#include "dpk/linalg.hpp"
#include "dpk/solver.hpp"

namespace dpk {

// Compute-and-Forward rate for one channel. With scale = 1 + P |h|^2 the
// lattice Gram matrix is scale * I - P h h^T, and the rate maximand
// (|a|^2 - P (h^T a)^2 / scale)^-1 equals scale / f(a). Rates are in bits.
struct RateResult {
    IntVector a_star;
    double f_star = 0.0;
    double rate_bits = 0.0;
    double scale = 0.0;
    SolveResult solve;
};

/// max(0, 1/2 log2(scale / f)).
double rate_from_objective(double scale, double f) noexcept;

RateResult compute_rate(std::span<const double> h, double power, const SolveOptions& opts = {});

}  // namespace dpk
