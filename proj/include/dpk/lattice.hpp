#pragma once

#include <cstdint>
#include <span>

#include "dpk/linalg.hpp"

namespace dpk {

/// A lattice given by a DP^k decomposed Gram matrix G = diag(d) - V V^T.
/// Construction checks the structural invariants (dimensions, finiteness,
/// 1 <= k <= n); positive definiteness is certified by validate().
class DpkInstance {
public:
    DpkInstance(Vector d, Matrix V);

    std::size_t n() const noexcept { return d_.size(); }
    std::size_t k() const noexcept { return V_.cols(); }
    const Vector& d() const noexcept { return d_; }
    const Matrix& V() const noexcept { return V_; }

    friend bool operator==(const DpkInstance&, const DpkInstance&) = default;

private:
    Vector d_;
    Matrix V_;
};

struct InstanceStats {
    double g_min = 0.0;       // smallest diagonal element of G
    double lambda_lb = 0.0;   // certified lower bound on lambda_min(G)
    double psi = 0.0;         // sqrt(g_min / lambda_lb)
    std::int64_t psi_ceil = 0;
    std::int64_t psi_floor = 0;
};

inline constexpr double kDefaultEigenRelTol = 1e-9;

/// diag(d) - V V^T. The upper triangle is computed and mirrored, so the
/// result is exactly symmetric.
Matrix gram(const DpkInstance& inst);

/// Certifies positive definiteness and derives the search radius.
/// Throws InvalidArgument if some d_i <= 0, NotPositiveDefinite otherwise.
InstanceStats validate(const DpkInstance& inst, double rel_tol = kDefaultEigenRelTol);

/// Compute-and-Forward lattice for channel h and transmit power:
/// G = (1 + power |h|^2) I - power h h^T, a rank-one instance.
DpkInstance candf_instance(std::span<const double> h, double power);

/// False when some |h_i| > 1, outside the usual channel model.
bool channel_gains_bounded(std::span<const double> h) noexcept;

inline constexpr double kDefaultShrink = 0.9;

/// Deterministic random instance: d_i ~ U[1, 10], V_ij ~ N(0, 1), V rescaled
/// until G is positive definite.
DpkInstance random_instance(std::size_t n, std::size_t k, std::uint64_t seed, double shrink = kDefaultShrink);

}  // namespace dpk
