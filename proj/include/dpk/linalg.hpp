#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dpk {

using Vector = std::vector<double>;
using IntVector = std::vector<std::int64_t>;

// Dense row-major real matrix. Entries are always finite.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<const double> entries() const noexcept { return data_; }

    double max_abs() const noexcept;
    bool is_symmetric() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// a^T G a, accumulated as sum_i a_i (sum_j G_ij a_j). The result is exactly
/// invariant under a -> -a.
double quadratic_form(const Matrix& G, std::span<const std::int64_t> a);

/// LU factorization with partial pivoting of a square matrix. Construction
/// fails (returns nullopt) when any pivot magnitude falls below rank_tol.
class LuFactorization {
public:
    static std::optional<LuFactorization> factor(const Matrix& M, double rank_tol);

    std::size_t size() const noexcept { return n_; }
    Vector solve(std::span<const double> c) const;

private:
    LuFactorization(std::size_t n, std::vector<double> lu, std::vector<std::size_t> perm)
        : n_(n), lu_(std::move(lu)), perm_(std::move(perm)) {}

    std::size_t n_;
    std::vector<double> lu_;
    std::vector<std::size_t> perm_;
};

/// Default pivot threshold for M: 1e-10 times its largest absolute entry.
double default_rank_tol(const Matrix& M) noexcept;

/// Solves Mx = c. Returns nullopt (singular) when a pivot is below rank_tol.
std::optional<Vector> solve_square_system(const Matrix& M, std::span<const double> c, double rank_tol);
std::optional<Vector> solve_square_system(const Matrix& M, std::span<const double> c);

/// True when G - shift*I admits an LDL^T factorization (diagonal pivoting)
/// with strictly positive pivots, i.e. its count of non-positive pivots is 0.
bool shifted_is_positive_definite(const Matrix& G, double shift);

/// Certified lower bound on the smallest eigenvalue of a symmetric positive
/// definite G: 0 < result <= lambda_min and result >= (1 - rel_tol) lambda_min.
/// Throws NotPositiveDefinite when G cannot be certified positive definite.
double smallest_eigenvalue_lower_bound(const Matrix& G, double rel_tol);

}  // namespace dpk
