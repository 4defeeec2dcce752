#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dpk/error.hpp"
#include "dpk/solver.hpp"
#include "solver_detail.hpp"

namespace dpk {

std::string_view to_string(SolvePath path) noexcept {
    switch (path) {
        case SolvePath::k1_sweep: return "k1-sweep";
        case SolvePath::general_k: return "general-k";
        case SolvePath::diagonal_shortcut: return "diagonal-shortcut";
    }
    return "unknown";
}

std::string_view to_string(Phase2Mode mode) noexcept {
    switch (mode) {
        case Phase2Mode::compatible: return "compatible";
        case Phase2Mode::exhaustive: return "exhaustive";
    }
    return "unknown";
}

namespace {

// Rounds half up into `a` (resized to match); returns true when every entry is zero.
bool round_into(std::span<const double> b, IntVector& a) {
    a.resize(b.size());
    bool zero = true;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double x = b[i];
        if (!std::isfinite(x) || std::abs(x) > 4.0e18) throw InvalidArgument("round_vec: value out of range");
        // Truncation is exact below 2^63; step down for negative non-integers.
        std::int64_t fl = static_cast<std::int64_t>(x);
        if (static_cast<double>(fl) > x) --fl;
        // x - floor(x) is exact, so the half-up test has no round-off.
        a[i] = fl + (x - static_cast<double>(fl) >= 0.5 ? 1 : 0);
        zero = zero && a[i] == 0;
    }
    return zero;
}

}  // namespace

IntVector round_vec(std::span<const double> b) {
    IntVector a;
    round_into(b, a);
    return a;
}

void canonicalize(IntVector& a) noexcept {
    for (auto x : a) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : a) y = -y;
        return;
    }
}

bool precedes(double f1, const IntVector& a1, double f2, const IntVector& a2) noexcept {
    if (f1 != f2) return f1 < f2;
    return a1 < a2;
}

namespace detail {

void Incumbent::offer(const Matrix& G, IntVector cand) {
    if (std::all_of(cand.begin(), cand.end(), [](std::int64_t x) { return x == 0; })) return;
    canonicalize(cand);
    const double f = quadratic_form(G, cand);
    if (a.empty() || precedes(f, cand, this->f, a)) {
        this->f = f;
        a = std::move(cand);
    }
}

void Incumbent::offer_rounded(const Matrix& G, std::span<const double> b) {
    ++evaluated;
    if (round_into(b, scratch_)) return;
    canonicalize(scratch_);
    if (scratch_ == last_) return;
    last_ = scratch_;
    const double f = quadratic_form(G, scratch_);
    if (a.empty() || precedes(f, scratch_, this->f, a)) {
        this->f = f;
        a = scratch_;
    }
}

void Incumbent::merge(const Incumbent& other) {
    evaluated += other.evaluated;
    if (other.a.empty()) return;
    if (a.empty() || precedes(other.f, other.a, f, a)) {
        f = other.f;
        a = other.a;
    }
}

void offer_unit_vectors(const Matrix& G, Incumbent& inc) {
    const std::size_t n = G.rows();
    for (std::size_t i = 0; i < n; ++i) {
        IntVector e(n, 0);
        e[i] = 1;
        ++inc.evaluated;
        inc.offer(G, std::move(e));
    }
}

Matrix scaled_factor(std::span<const double> d, const Matrix& V) {
    Matrix M(V.rows(), V.cols());
    for (std::size_t i = 0; i < V.rows(); ++i)
        for (std::size_t c = 0; c < V.cols(); ++c) M(i, c) = V(i, c) / d[i];
    return M;
}

}  // namespace detail

namespace {

// Merges sorted 1-D points closer than tol (1 + |x|) to the last kept point.
std::vector<double> dedup_sorted(std::vector<double> xs, double tol) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        if (!out.empty() && x - out.back() <= tol * (1.0 + std::abs(out.back()))) continue;
        out.push_back(x);
    }
    return out;
}

BreakpointSet k1_breakpoints(std::span<const double> d, std::span<const double> v, std::int64_t psi_ceil,
                             double dedup_tol) {
    BreakpointSet set;
    set.dim = 1;
    const std::size_t n = d.size();
    const double half_width = static_cast<double>(psi_ceil) + 0.5;

    // |x| <= min_j (d_j / |v_j|) (ceil(psi) + 1/2) for any optimal cell.
    double x_max = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
        if (v[j] != 0.0) x_max = std::min(x_max, d[j] / std::abs(v[j]) * half_width);
    if (!std::isfinite(x_max)) return set;

    std::vector<double> raw;
    for (std::size_t j = 0; j < n; ++j) {
        if (v[j] == 0.0) continue;
        const double ratio = d[j] / std::abs(v[j]);
        const double c_max = std::min(half_width, x_max / ratio) * (1.0 + 1e-12);
        for (double c = 0.5; c <= c_max; c += 1.0) {
            raw.push_back(ratio * c);
            raw.push_back(-ratio * c);
        }
    }
    set.raw_count = raw.size();
    set.coords = dedup_sorted(std::move(raw), dedup_tol);
    return set;
}

void sweep_k1(const Matrix& G, std::span<const double> d, std::span<const double> v, const BreakpointSet& phi,
              detail::Incumbent& inc) {
    const std::size_t n = d.size();
    std::vector<double> slope(n);
    for (std::size_t i = 0; i < n; ++i) slope[i] = v[i] / d[i];
    std::vector<double> b(n);
    for (std::size_t t = 0; t + 1 < phi.coords.size(); ++t) {
        const double mid = 0.5 * (phi.coords[t] + phi.coords[t + 1]);
        for (std::size_t i = 0; i < n; ++i) b[i] = mid * slope[i];
        inc.offer_rounded(G, b);
    }
}

SolveResult finish(const detail::Incumbent& inc, std::uint64_t phase1, SolvePath path, const InstanceStats& stats) {
    SolveResult r;
    r.a_star = inc.a;
    r.f_star = inc.f;
    r.candidates_evaluated = inc.evaluated;
    r.phase1_points = phase1;
    r.used_path = path;
    r.stats = stats;
    return r;
}

// Factor W (n x r, r = numerical column rank of V) with W W^T = V V^T, via
// column-pivoted Gram-Schmidt V = Q R followed by R R^T = L L^T, W = Q L.
// Returns V itself when it already has full column rank.
Matrix full_rank_factor(const Matrix& V) {
    const std::size_t n = V.rows();
    const std::size_t k = V.cols();
    std::vector<std::vector<double>> cols(k, std::vector<double>(n));
    double max_norm = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cols[c][i] = V(i, c);
            s += V(i, c) * V(i, c);
        }
        max_norm = std::max(max_norm, std::sqrt(s));
    }
    if (max_norm == 0.0) return Matrix(n, 1);  // caller checks for zero

    std::vector<std::vector<double>> q;
    std::vector<std::vector<double>> r;  // rows of R, length k
    std::vector<bool> used(k, false);
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = k;
        double best_norm = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            if (used[c]) continue;
            double s = 0.0;
            for (double x : cols[c]) s += x * x;
            if (best == k || std::sqrt(s) > best_norm) {
                best = c;
                best_norm = std::sqrt(s);
            }
        }
        if (best == k || best_norm <= 1e-10 * max_norm) break;
        used[best] = true;
        std::vector<double> qv(n);
        for (std::size_t i = 0; i < n; ++i) qv[i] = cols[best][i] / best_norm;
        std::vector<double> rrow(k, 0.0);
        rrow[best] = best_norm;
        for (std::size_t c = 0; c < k; ++c) {
            if (used[c]) continue;
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += qv[i] * cols[c][i];
            rrow[c] = dot;
            for (std::size_t i = 0; i < n; ++i) cols[c][i] -= dot * qv[i];
        }
        q.push_back(std::move(qv));
        r.push_back(std::move(rrow));
    }
    const std::size_t rank = q.size();
    if (rank == k) return V;

    // S = R R^T, Cholesky S = L L^T.
    std::vector<double> L(rank * rank, 0.0);
    for (std::size_t i = 0; i < rank; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < k; ++c) s += r[i][c] * r[j][c];
            for (std::size_t t = 0; t < j; ++t) s -= L[i * rank + t] * L[j * rank + t];
            if (i == j)
                L[i * rank + i] = std::sqrt(std::max(s, 0.0));
            else
                L[i * rank + j] = s / L[j * rank + j];
        }
    }
    Matrix W(n, rank);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < rank; ++j) {
            double s = 0.0;
            for (std::size_t t = j; t < rank; ++t) s += q[t][i] * L[t * rank + j];
            W(i, j) = s;
        }
    return W;
}

bool all_zero(const Matrix& V) {
    const auto e = V.entries();
    return std::all_of(e.begin(), e.end(), [](double x) { return x == 0.0; });
}

SolveResult solve_general(const Matrix& G, std::span<const double> d, const Matrix& W, const InstanceStats& stats,
                          const SolveOptions& opts) {
    const Matrix dinv_w = detail::scaled_factor(d, W);
    const BreakpointSet vertices = detail::phase1_points(dinv_w, stats.psi_ceil, opts.rank_tol_rel, opts.dedup_tol);
    detail::Incumbent inc;
    detail::offer_unit_vectors(G, inc);
    detail::phase2_run(G, dinv_w, vertices, opts.phase2, opts.threads, inc);
    return finish(inc, vertices.size(), SolvePath::general_k, stats);
}

SolveResult solve_rank_one(const Matrix& G, std::span<const double> d, std::span<const double> v,
                           const InstanceStats& stats, const SolveOptions& opts) {
    detail::Incumbent inc;
    detail::offer_unit_vectors(G, inc);
    const BreakpointSet phi = k1_breakpoints(d, v, stats.psi_ceil, opts.dedup_tol);
    if (phi.size() == 0) return finish(inc, 0, SolvePath::diagonal_shortcut, stats);
    sweep_k1(G, d, v, phi, inc);
    return finish(inc, phi.size(), SolvePath::k1_sweep, stats);
}

std::vector<double> column(const Matrix& M, std::size_t c) {
    std::vector<double> v(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i) v[i] = M(i, c);
    return v;
}

}  // namespace

BreakpointSet breakpoints_k1(const DpkInstance& inst, const InstanceStats& stats, double dedup_tol) {
    if (inst.k() != 1) throw InvalidArgument("breakpoints_k1: instance must have k = 1");
    return k1_breakpoints(inst.d(), column(inst.V(), 0), stats.psi_ceil, dedup_tol);
}

SolveResult solve_k1(const DpkInstance& inst, const SolveOptions& opts) {
    if (inst.k() != 1) throw InvalidArgument("solve_k1: instance must have k = 1");
    const InstanceStats stats = validate(inst, opts.eig_rel_tol);
    return solve_rank_one(gram(inst), inst.d(), column(inst.V(), 0), stats, opts);
}

BreakpointSet phase1_vertices(const DpkInstance& inst, const InstanceStats& stats, double rank_tol_rel,
                              double dedup_tol) {
    return detail::phase1_points(detail::scaled_factor(inst.d(), inst.V()), stats.psi_ceil, rank_tol_rel, dedup_tol);
}

SolveResult phase2_enumerate(const DpkInstance& inst, const BreakpointSet& vertices, const SolveOptions& opts) {
    if (vertices.size() > 0 && vertices.dim != inst.k())
        throw InvalidArgument("phase2_enumerate: vertex dimension does not match k");
    const InstanceStats stats = validate(inst, opts.eig_rel_tol);
    const Matrix G = gram(inst);
    detail::Incumbent inc;
    detail::offer_unit_vectors(G, inc);
    detail::phase2_run(G, detail::scaled_factor(inst.d(), inst.V()), vertices, opts.phase2, opts.threads, inc);
    return finish(inc, vertices.size(), SolvePath::general_k, stats);
}

SolveResult solve(const DpkInstance& inst, const SolveOptions& opts) {
    const InstanceStats stats = validate(inst, opts.eig_rel_tol);
    const Matrix G = gram(inst);
    if (all_zero(inst.V())) {
        detail::Incumbent inc;
        detail::offer_unit_vectors(G, inc);
        return finish(inc, 0, SolvePath::diagonal_shortcut, stats);
    }
    const Matrix W = full_rank_factor(inst.V());
    if (W.cols() == 1 && !opts.force_general) return solve_rank_one(G, inst.d(), column(W, 0), stats, opts);
    return solve_general(G, inst.d(), W, stats, opts);
}

}  // namespace dpk
