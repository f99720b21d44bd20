#pragma once

#include <cstddef>
#include <vector>

namespace rrsel {

/// Shape parameters of a Beta(a, b) law. Both must be positive.
struct BetaParams {
  double a;
  double b;

  /// Throws DomainError unless a > 0 and b > 0 (and finite).
  void validate() const;
};

/// ln B(a, b). Uses a Stirling-difference form when an argument is large so
/// that ln Γ(a) - ln Γ(a+b) does not cancel.
double log_beta_fn(BetaParams params);

/// Regularized incomplete Beta I_x(a, b), the CDF of Beta(a, b) at x.
double beta_cdf(BetaParams params, double x);

/// ln I_x(a, b). Finite for tiny x where I_x itself would underflow.
double log_beta_cdf(BetaParams params, double x);

/// Quantile: the x in [0, 1] with I_x(a, b) = z.
double beta_cdf_inv(BetaParams params, double z);

/// ln of the quantile. Useful when the quantile underflows a double.
double log_beta_cdf_inv(BetaParams params, double z);

/// Γ(k) = sqrt(F⁻¹_{(n-k)/2, 1/2}(alpha / (k_max (p - k + 1)))), 1 <= k <= k_max < n.
double rrt_threshold(std::size_t n, std::size_t p, std::size_t k_max, double alpha,
                     std::size_t k);

/// RRT thresholds for k = 1..k_max at a fixed alpha.
struct ThresholdTable {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t k_max = 0;
  double alpha = 0.0;
  std::vector<double> values;  // values[k-1] = Γ(k)

  std::size_t size() const noexcept { return values.size(); }
  double at(std::size_t k) const { return values.at(k - 1); }
  /// First `count` entries, keeping k_max (the thresholds depend on it).
  ThresholdTable truncated(std::size_t count) const;
};

ThresholdTable build_threshold_table(std::size_t n, std::size_t p, std::size_t k_max,
                                     double alpha);
/// Only the first `count` <= k_max entries.
ThresholdTable build_threshold_table(std::size_t n, std::size_t p, std::size_t k_max,
                                     double alpha, std::size_t count);

}  // namespace rrsel
