#include "dpk/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dpk/error.hpp"

namespace dpk {

namespace {

// ceil/floor of psi after nudging it up by a relative 1e-12, so a value that
// lands just below an integer through round-off does not lose a shell.
std::int64_t guarded_ceil(double psi) { return static_cast<std::int64_t>(std::ceil(psi + 1e-12 * psi)); }
std::int64_t guarded_floor(double psi) { return static_cast<std::int64_t>(std::floor(psi + 1e-12 * psi)); }

}  // namespace

DpkInstance::DpkInstance(Vector d, Matrix V) : d_(std::move(d)), V_(std::move(V)) {
    if (d_.empty()) throw InvalidArgument("instance: n must be >= 1");
    if (V_.rows() != d_.size()) throw InvalidArgument("instance: V must have n rows");
    if (V_.cols() > V_.rows()) throw InvalidArgument("instance: k must not exceed n");
    for (double x : d_)
        if (!std::isfinite(x)) throw InvalidArgument("instance: non-finite diagonal entry");
}

Matrix gram(const DpkInstance& inst) {
    const std::size_t n = inst.n();
    const std::size_t k = inst.k();
    const Matrix& V = inst.V();
    Matrix G(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double p = 0.0;
            for (std::size_t c = 0; c < k; ++c) p += V(i, c) * V(j, c);
            const double g = (i == j ? inst.d()[i] : 0.0) - p;
            G(i, j) = g;
            G(j, i) = g;
        }
    }
    return G;
}

InstanceStats validate(const DpkInstance& inst, double rel_tol) {
    for (double x : inst.d())
        if (!(x > 0.0)) throw InvalidArgument("instance: diagonal of D must be strictly positive");
    const Matrix G = gram(inst);
    InstanceStats s;
    s.g_min = G(0, 0);
    for (std::size_t i = 1; i < inst.n(); ++i) s.g_min = std::min(s.g_min, G(i, i));
    s.lambda_lb = smallest_eigenvalue_lower_bound(G, rel_tol);
    s.psi = std::sqrt(s.g_min / s.lambda_lb);
    s.psi_ceil = guarded_ceil(s.psi);
    s.psi_floor = guarded_floor(s.psi);
    return s;
}

DpkInstance candf_instance(std::span<const double> h, double power) {
    if (h.empty()) throw InvalidArgument("candf: channel vector is empty");
    if (!(power > 0.0) || !std::isfinite(power)) throw InvalidArgument("candf: power must be positive");
    double norm2 = 0.0;
    for (double x : h) {
        if (!std::isfinite(x)) throw InvalidArgument("candf: non-finite channel gain");
        norm2 += x * x;
    }
    if (norm2 == 0.0) throw InvalidArgument("candf: channel vector is zero");
    const std::size_t n = h.size();
    const double root = std::sqrt(power);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = root * h[i];
    return DpkInstance(Vector(n, 1.0 + power * norm2), Matrix(n, 1, std::move(v)));
}

bool channel_gains_bounded(std::span<const double> h) noexcept {
    return std::all_of(h.begin(), h.end(), [](double x) { return std::abs(x) <= 1.0; });
}

DpkInstance random_instance(std::size_t n, std::size_t k, std::uint64_t seed, double shrink) {
    if (n == 0 || k == 0 || k > n) throw InvalidArgument("random_instance: need 1 <= k <= n");
    if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidArgument("random_instance: shrink must lie in (0, 1)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> diag(1.0, 10.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    Vector d(n);
    for (auto& x : d) x = diag(rng);
    std::vector<double> v(n * k);
    for (auto& x : v) x = normal(rng);

    // D - V V^T = D^1/2 (I - M) D^1/2 with M = D^-1/2 V V^T D^-1/2, whose
    // nonzero spectrum is that of A = V^T D^-1 V. Scale so lambda_max(A) = shrink^2.
    Matrix A(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t i = 0; i < n; ++i) A(a, b) += v[i * k + a] * v[i * k + b] / d[i];
    double trace = 0.0;
    for (std::size_t a = 0; a < k; ++a) trace += A(a, a);
    if (trace > 0.0) {
        // lambda_max(A) <= t - lambda_lb(t I - A) for any t above the spectrum.
        const double t = 2.0 * trace;
        Matrix shifted(k, k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) shifted(a, b) = (a == b ? t : 0.0) - A(a, b);
        const double lambda_max = t - smallest_eigenvalue_lower_bound(shifted, kDefaultEigenRelTol);
        const double scale = shrink / std::sqrt(lambda_max);
        for (auto& x : v) x *= scale;
    }

    for (;;) {
        DpkInstance inst(d, Matrix(n, k, v));
        try {
            validate(inst);
            return inst;
        } catch (const NotPositiveDefinite&) {
            for (auto& x : v) x *= shrink;
        }
    }
}

}  // namespace dpk
