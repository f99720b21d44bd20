#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rrsel {

using Vector = std::vector<double>;

/// Dense real matrix stored column-major; greedy solvers walk whole columns.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of `values` (column-major). Throws DimensionMismatch on a
  /// length mismatch and NonFinite on NaN/Inf entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static DenseMatrix identity(std::size_t n);
  /// Builds from row-major nested rows, as read from CSV.
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[j * rows_ + i]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[j * rows_ + i]; }

  std::span<const double> column(std::size_t j) const {
    return {values_.data() + j * rows_, rows_};
  }
  std::span<double> column(std::size_t j) { return {values_.data() + j * rows_, rows_}; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

/// X·b. Throws DimensionMismatch.
Vector multiply(const DenseMatrix& x, std::span<const double> b);
/// Xᵀ·r. Throws DimensionMismatch.
Vector multiply_transpose(const DenseMatrix& x, std::span<const double> r);
/// Columns of `x` listed in `cols`, in order.
DenseMatrix select_columns(const DenseMatrix& x, std::span<const std::size_t> cols);

// Incrementally grown thin QR factorization of a column subset X_S = Q·R.
//
// Columns are appended with modified Gram-Schmidt plus one reorthogonalization
// pass, so each append costs O(n·k). A column whose orthogonal component is
// below 1e-12 of its own norm is rejected with RankDeficient and the state is
// left untouched.
class OrthoBasis {
 public:
  static constexpr double kRankTolerance = 1e-12;

  OrthoBasis() = default;
  explicit OrthoBasis(std::size_t ambient_dim) : n_(ambient_dim) {}

  std::size_t ambient_dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return selected_.size(); }
  bool empty() const noexcept { return selected_.empty(); }
  const std::vector<std::size_t>& selected_cols() const noexcept { return selected_; }

  std::span<const double> basis_vector(std::size_t i) const {
    return {q_.data() + i * n_, n_};
  }
  /// R(i, j) for i <= j; zero below the diagonal.
  double triangular(std::size_t i, std::size_t j) const;

  void append(const DenseMatrix& x, std::size_t col);
  /// r = y - Σ ⟨q_i, y⟩ q_i, i.e. (I - P_S) y.
  Vector project_out(std::span<const double> y) const;
  /// Solves R c = Qᵀ y; coefficients are ordered like selected_cols().
  Vector least_squares_coeffs(std::span<const double> y) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> selected_;
  std::vector<double> q_;  // n × k, column-major
  std::vector<double> r_;  // packed upper triangle, column j holds j+1 entries
};

/// Value-returning append: the input state is not modified.
OrthoBasis basis_append(OrthoBasis state, const DenseMatrix& x, std::size_t col);
Vector project_out(const OrthoBasis& state, std::span<const double> y);
Vector least_squares_coeffs(const OrthoBasis& state, std::span<const double> y);

}  // namespace rrsel
