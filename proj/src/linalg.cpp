#include "dpk/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpk/error.hpp"

namespace dpk {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
    for (double x : xs) {
        if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : Matrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) throw InvalidArgument("matrix: rows and cols must be >= 1");
    if (data_.size() != rows_ * cols_) throw InvalidArgument("matrix: entry count does not match rows*cols");
    require_finite(data_, "matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw InvalidArgument("matrix: no rows");
    const std::size_t cols = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw InvalidArgument("matrix: ragged rows");
        data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), cols, std::move(data));
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

bool Matrix::is_symmetric() const noexcept {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

double quadratic_form(const Matrix& G, std::span<const std::int64_t> a) {
    const std::size_t n = a.size();
    if (G.rows() != n || G.cols() != n) throw InvalidArgument("quadratic_form: dimension mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        double row = 0.0;
        const auto gi = G.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (a[j] != 0) row += gi[j] * static_cast<double>(a[j]);
        }
        total += static_cast<double>(a[i]) * row;
    }
    return total;
}

std::optional<LuFactorization> LuFactorization::factor(const Matrix& M, double rank_tol) {
    if (M.rows() != M.cols()) throw InvalidArgument("lu: matrix is not square");
    if (!(rank_tol > 0.0)) throw InvalidArgument("lu: rank_tol must be positive");
    const std::size_t n = M.rows();
    std::vector<double> lu(M.entries().begin(), M.entries().end());
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(lu[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(lu[r * n + col]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best < rank_tol) return std::nullopt;
        if (pivot != col) {
            std::swap_ranges(lu.begin() + col * n, lu.begin() + (col + 1) * n, lu.begin() + pivot * n);
            std::swap(perm[col], perm[pivot]);
        }
        const double p = lu[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = lu[r * n + col] / p;
            lu[r * n + col] = factor;
            if (factor == 0.0) continue;
            for (std::size_t c = col + 1; c < n; ++c) lu[r * n + c] -= factor * lu[col * n + c];
        }
    }
    return LuFactorization(n, std::move(lu), std::move(perm));
}

Vector LuFactorization::solve(std::span<const double> c) const {
    if (c.size() != n_) throw InvalidArgument("lu solve: dimension mismatch");
    Vector x(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = c[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu_[i * n_ + j] * x[j];
        x[i] = s;
    }
    for (std::size_t i = n_; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n_; ++j) s -= lu_[i * n_ + j] * x[j];
        x[i] = s / lu_[i * n_ + i];
    }
    return x;
}

double default_rank_tol(const Matrix& M) noexcept {
    const double scale = M.max_abs();
    return scale > 0.0 ? 1e-10 * scale : std::numeric_limits<double>::min();
}

std::optional<Vector> solve_square_system(const Matrix& M, std::span<const double> c, double rank_tol) {
    if (M.rows() != M.cols() || c.size() != M.rows())
        throw InvalidArgument("solve_square_system: dimension mismatch");
    const auto lu = LuFactorization::factor(M, rank_tol);
    if (!lu) return std::nullopt;
    return lu->solve(c);
}

std::optional<Vector> solve_square_system(const Matrix& M, std::span<const double> c) {
    return solve_square_system(M, c, default_rank_tol(M));
}

bool shifted_is_positive_definite(const Matrix& G, double shift) {
    if (G.rows() != G.cols()) throw InvalidArgument("inertia: matrix is not square");
    const std::size_t n = G.rows();
    std::vector<double> a(G.entries().begin(), G.entries().end());
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= shift;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    // Symmetric pivoting on the largest remaining diagonal of the Schur
    // complement. A positive definite complement has all diagonals positive,
    // so a non-positive largest diagonal is a negative/zero pivot.
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pivot = step;
        double best = a[order[step] * n + order[step]];
        for (std::size_t t = step + 1; t < n; ++t) {
            const double v = a[order[t] * n + order[t]];
            if (v > best) {
                best = v;
                pivot = t;
            }
        }
        if (!(best > 0.0)) return false;
        std::swap(order[step], order[pivot]);
        const std::size_t p = order[step];
        for (std::size_t s = step + 1; s < n; ++s) {
            const std::size_t r = order[s];
            const double l = a[r * n + p] / best;
            if (l == 0.0) continue;
            for (std::size_t t = step + 1; t < n; ++t) {
                const std::size_t c = order[t];
                a[r * n + c] -= l * a[p * n + c];
            }
        }
    }
    return true;
}

double smallest_eigenvalue_lower_bound(const Matrix& G, double rel_tol) {
    if (G.rows() != G.cols()) throw InvalidArgument("eigenvalue bound: matrix is not square");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("eigenvalue bound: rel_tol must lie in (0, 1)");
    const std::size_t n = G.rows();

    double gershgorin_low = std::numeric_limits<double>::infinity();
    double min_diag = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) radius += std::abs(G(i, j));
        gershgorin_low = std::min(gershgorin_low, G(i, i) - radius);
        min_diag = std::min(min_diag, G(i, i));
    }

    if (!(min_diag > 0.0) || !shifted_is_positive_definite(G, 0.0))
        throw NotPositiveDefinite("matrix is not positive definite");

    // Invariant: G - lo*I is positive definite, G - hi*I is not.
    double lo = std::max(0.0, gershgorin_low);
    double hi = min_diag;
    if (lo > 0.0 && !shifted_is_positive_definite(G, lo)) lo = 0.0;
    const double target = 0.5 * rel_tol;
    while (hi - lo > target * hi) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (shifted_is_positive_definite(G, mid))
            lo = mid;
        else
            hi = mid;
    }

    // Round-off in the factorization can certify a shift up to roughly
    // (n+1) eps |G| past the true eigenvalue.
    const double margin = 2.0 * static_cast<double>(n + 1) * std::numeric_limits<double>::epsilon() * G.max_abs();
    const double bound = lo - margin;
    if (!(bound > 0.0)) throw NotPositiveDefinite("smallest eigenvalue is not distinguishable from zero");
    return bound;
}

}  // namespace dpk
