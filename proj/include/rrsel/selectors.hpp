#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rrsel/omp.hpp"
#include "rrsel/special.hpp"

namespace rrsel {

/// RR(k) = ‖r^k‖₂ / ‖r^{k-1}‖₂ for k = 1..K, with 0/0 read as 0.
struct ResidualRatios {
  std::vector<double> values;  // values[k-1] = RR(k)

  std::size_t size() const noexcept { return values.size(); }
  double at(std::size_t k) const { return values.at(k - 1); }
};

struct RrtaParams {
  double pfd_finite = 0.1;
  double q = 2.0;

  /// Throws DomainError unless 0 < pfd_finite < 1 and q > 0.
  void validate() const;
};

/// Smallest admissible adaptive level; keeps Γ strictly positive.
inline constexpr double kMinAlpha = 1e-300;

/// Index chosen by a selector; k = 0 with `empty_selection` when nothing qualifies.
struct Selection {
  std::size_t k = 0;
  EstimateStatus status = EstimateStatus::ok;
};

/// Throws EmptyPath when the path has no steps.
ResidualRatios residual_ratios(const SolutionPath& path);

/// Largest k with RR(k) < Γ(k). Throws LengthMismatch.
Selection rrt_select(const ResidualRatios& ratios, const ThresholdTable& thresholds);

/// argmin_k RR(k), ties to the smallest k. Throws EmptyPath.
std::size_t rrm_select(const ResidualRatios& ratios);

/// α* = min(pfd_finite, (min_k RR(k))^q), floored at kMinAlpha.
double rrta_alpha(const ResidualRatios& ratios, const RrtaParams& params);

/// RRT at level rrta_alpha(ratios, params). Thresholds use the path's k_max.
Selection rrta_select(const ResidualRatios& ratios, std::size_t n, std::size_t p,
                      std::size_t k_max, const RrtaParams& params);

/// S_k for a selector outcome.
SupportEstimate estimate_from(const SolutionPath& path, Selection selection);

/// min{k : S ⊆ S_k}; nullopt stands for "infinity" (no superset on the path).
std::optional<std::size_t> minimal_superset_index(const SolutionPath& path,
                                                  const std::vector<std::size_t>& true_support);

}  // namespace rrsel
