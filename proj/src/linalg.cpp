#include "rrsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rrsel/error.hpp"

namespace rrsel {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix " + std::to_string(rows_) + "x" + std::to_string(cols_) + " given " +
                    std::to_string(values_.size()) + " values");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::NonFinite, "matrix contains NaN or Inf");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<double> values(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) {
      throw Error(ErrorCode::DimensionMismatch,
                  "row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                      " entries, expected " + std::to_string(c));
    }
    for (std::size_t j = 0; j < c; ++j) values[j * r + i] = rows[i][j];
  }
  return DenseMatrix(r, c, std::move(values));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) {
  // Scaled accumulation keeps tiny and huge residuals (y scaled by 1e±6) finite.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : a) {
    if (v == 0.0) continue;
    const double av = std::abs(v);
    if (scale < av) {
      ssq = 1.0 + ssq * (scale / av) * (scale / av);
      scale = av;
    } else {
      ssq += (av / scale) * (av / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Vector multiply(const DenseMatrix& x, std::span<const double> b) {
  if (b.size() != x.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "multiply: vector length " +
                                                  std::to_string(b.size()) + " vs " +
                                                  std::to_string(x.cols()) + " columns");
  }
  Vector out(x.rows(), 0.0);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    if (b[j] == 0.0) continue;
    const auto col = x.column(j);
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] += col[i] * b[j];
  }
  return out;
}

Vector multiply_transpose(const DenseMatrix& x, std::span<const double> r) {
  if (r.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "multiply_transpose: vector length " +
                                                  std::to_string(r.size()) + " vs " +
                                                  std::to_string(x.rows()) + " rows");
  }
  Vector out(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) out[j] = dot(x.column(j), r);
  return out;
}

DenseMatrix select_columns(const DenseMatrix& x, std::span<const std::size_t> cols) {
  DenseMatrix out(x.rows(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] >= x.cols()) {
      throw Error(ErrorCode::IndexOutOfRange, "column " + std::to_string(cols[k]));
    }
    std::copy_n(x.column(cols[k]).begin(), x.rows(), out.column(k).begin());
  }
  return out;
}

double OrthoBasis::triangular(std::size_t i, std::size_t j) const {
  if (i > j) return 0.0;
  return r_[j * (j + 1) / 2 + i];
}

void OrthoBasis::append(const DenseMatrix& x, std::size_t col) {
  if (x.rows() != n_) {
    throw Error(ErrorCode::DimensionMismatch, "basis dimension " + std::to_string(n_) +
                                                  " vs matrix rows " + std::to_string(x.rows()));
  }
  if (col >= x.cols()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "column " + std::to_string(col) + " of " + std::to_string(x.cols()));
  }
  if (std::find(selected_.begin(), selected_.end(), col) != selected_.end()) {
    throw Error(ErrorCode::RankDeficient, "column " + std::to_string(col) + " already selected");
  }

  const auto source = x.column(col);
  const double source_norm = norm2(source);
  const std::size_t k = selected_.size();

  Vector v(source.begin(), source.end());
  Vector coeffs(k, 0.0);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < k; ++i) {
      const auto qi = basis_vector(i);
      const double c = dot(qi, v);
      coeffs[i] += c;
      for (std::size_t t = 0; t < n_; ++t) v[t] -= c * qi[t];
    }
  }
  const double rho = norm2(v);
  if (!(rho > kRankTolerance * source_norm) || rho == 0.0) {
    throw Error(ErrorCode::RankDeficient,
                "column " + std::to_string(col) + " lies in the span of the current basis");
  }

  for (double& t : v) t /= rho;
  q_.insert(q_.end(), v.begin(), v.end());
  r_.insert(r_.end(), coeffs.begin(), coeffs.end());
  r_.push_back(rho);
  selected_.push_back(col);
}

Vector OrthoBasis::project_out(std::span<const double> y) const {
  if (y.size() != n_) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length " + std::to_string(y.size()) + " vs " + std::to_string(n_));
  }
  Vector r(y.begin(), y.end());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto qi = basis_vector(i);
    const double c = dot(qi, r);
    for (std::size_t t = 0; t < n_; ++t) r[t] -= c * qi[t];
  }
  return r;
}

Vector OrthoBasis::least_squares_coeffs(std::span<const double> y) const {
  if (empty()) throw Error(ErrorCode::EmptyBasis, "least squares on an empty basis");
  if (y.size() != n_) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length " + std::to_string(y.size()) + " vs " + std::to_string(n_));
  }
  const std::size_t k = size();
  Vector c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = dot(basis_vector(i), y);
  for (std::size_t i = k; i-- > 0;) {
    double s = c[i];
    for (std::size_t j = i + 1; j < k; ++j) s -= triangular(i, j) * c[j];
    c[i] = s / triangular(i, i);
  }
  return c;
}

OrthoBasis basis_append(OrthoBasis state, const DenseMatrix& x, std::size_t col) {
  state.append(x, col);
  return state;
}

Vector project_out(const OrthoBasis& state, std::span<const double> y) {
  return state.project_out(y);
}

Vector least_squares_coeffs(const OrthoBasis& state, std::span<const double> y) {
  return state.least_squares_coeffs(y);
}

}  // namespace rrsel
