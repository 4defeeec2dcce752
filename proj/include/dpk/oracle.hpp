#pragma once

#include <cstdint>
#include <vector>

#include "dpk/lattice.hpp"
#include "dpk/linalg.hpp"

namespace dpk {

struct OracleResult {
    double f_star = 0.0;
    std::vector<IntVector> minimizers;  // canonical, lexicographic order
    std::uint64_t vectors_scanned = 0;
};

inline constexpr std::uint64_t kDefaultOracleBudget = 100'000'000;

/// Brute-force minimum of a^T G a over nonzero a with |a|_inf <= radius,
/// together with every unit vector. Only canonical vectors (first nonzero
/// entry positive) are evaluated. Throws BudgetExceeded when
/// (2 radius + 1)^n > budget.
OracleResult brute_force_box(const DpkInstance& inst, std::int64_t radius, std::uint64_t budget = kDefaultOracleBudget);

/// Brute-force minimum over nonzero a with |a|_2^2 <= radius2 (plus every
/// unit vector). Prunes on |a|^2 alone, never on G. Throws BudgetExceeded
/// once more than `budget` canonical vectors have been evaluated.
OracleResult brute_force_ball(const DpkInstance& inst, double radius2, std::uint64_t budget = kDefaultOracleBudget);

/// brute_force_box over the ball guaranteed to contain the shortest vector,
/// radius floor(psi).
OracleResult brute_force(const DpkInstance& inst, const InstanceStats& stats,
                         std::uint64_t budget = kDefaultOracleBudget);

}  // namespace dpk
