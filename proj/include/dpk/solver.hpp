#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "dpk/lattice.hpp"
#include "dpk/linalg.hpp"

namespace dpk {

enum class SolvePath { k1_sweep, general_k, diagonal_shortcut };

std::string_view to_string(SolvePath path) noexcept;

// How Phase 2 picks the (k+1)-subsets of vertices whose average it rounds.
enum class Phase2Mode {
    // Only subsets whose vertices can all lie on the closure of a single
    // cell {x : |D^-1 V x - a| <= 1/2}. Exact: every cell interior is still
    // reached through a simplex of its own vertices.
    compatible,
    // Every (k+1)-subset in lexicographic order.
    exhaustive,
};

std::string_view to_string(Phase2Mode mode) noexcept;

struct SolveOptions {
    double eig_rel_tol = kDefaultEigenRelTol;
    double rank_tol_rel = 1e-10;  // pivot threshold relative to max |(D^-1 V)_pi|
    double dedup_tol = 1e-9;      // vertices closer than dedup_tol (1 + |x|) merge
    unsigned threads = 1;
    Phase2Mode phase2 = Phase2Mode::compatible;
    bool force_general = false;   // use the two-phase path even when k = 1
};

struct SolveResult {
    IntVector a_star;
    double f_star = 0.0;
    std::uint64_t candidates_evaluated = 0;
    std::uint64_t phase1_points = 0;
    SolvePath used_path = SolvePath::diagonal_shortcut;
    InstanceStats stats;
};

/// Candidate real points: scalars for the k = 1 sweep, k-vectors for the
/// vertex sets of the general path. Stored flat, `dim` values per point.
struct BreakpointSet {
    std::size_t dim = 1;
    std::vector<double> coords;
    std::uint64_t raw_count = 0;  // before deduplication

    std::size_t size() const noexcept { return dim == 0 ? 0 : coords.size() / dim; }
    std::span<const double> point(std::size_t i) const noexcept { return {coords.data() + i * dim, dim}; }
};

/// Entrywise nearest integer, exact half-integers rounded towards +infinity.
IntVector round_vec(std::span<const double> b);

/// Flips the sign so the first nonzero entry is positive.
void canonicalize(IntVector& a) noexcept;

/// Strict total order used for every tie-break: smaller f first, then the
/// lexicographically smaller canonical vector.
bool precedes(double f1, const IntVector& a1, double f2, const IntVector& a2) noexcept;

/// Sorted, deduplicated breakpoints of x -> round(x D^-1 v) inside the
/// norm window |a| <= psi. Empty when v = 0. Requires k = 1.
BreakpointSet breakpoints_k1(const DpkInstance& inst, const InstanceStats& stats, double dedup_tol = 1e-9);

/// Midpoint sweep over consecutive breakpoints plus every unit vector.
SolveResult solve_k1(const DpkInstance& inst, const SolveOptions& opts = {});

/// All vertices ((D^-1 V)_pi)^-1 c_pi over k-subsets pi with full-rank
/// (D^-1 V)_pi and half-integer c_pi with |c_pi| <= ceil(psi) + 1/2.
/// Lexicographically sorted and deduplicated.
BreakpointSet phase1_vertices(const DpkInstance& inst, const InstanceStats& stats, double rank_tol_rel = 1e-10,
                              double dedup_tol = 1e-9);

/// Rounds D^-1 V (average of k+1 vertices) over the subsets selected by
/// opts.phase2 and returns the best candidate, unit vectors included.
SolveResult phase2_enumerate(const DpkInstance& inst, const BreakpointSet& vertices, const SolveOptions& opts = {});

/// Exact shortest vector: diagonal shortcut when V = 0, the k = 1 sweep for
/// rank-one V, the two-phase vertex/simplex enumeration otherwise.
SolveResult solve(const DpkInstance& inst, const SolveOptions& opts = {});

}  // namespace dpk
