#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rrsel/designs.hpp"
#include "rrsel/linalg.hpp"

namespace rrsel {

enum class GreedyRule { omp, ols };

std::string_view to_string(GreedyRule rule);
GreedyRule parse_greedy_rule(std::string_view name);

/// The nested supports S_1 ⊂ S_2 ⊂ ... ⊂ S_K produced by one greedy run, with
/// residual statistics for every k = 0..K.
struct SolutionPath {
  GreedyRule rule = GreedyRule::omp;
  std::vector<std::size_t> selected;  // t^1..t^K (0-based column indices)
  Vector residual_norms;              // ‖r^k‖₂, k = 0..K
  Vector residual_corr_inf;           // ‖Xᵀ r^k‖_∞, k = 0..K
  Vector coeffs_final;                // least-squares β̂ on S_K, ordered like `selected`
  std::size_t k_max = 0;              // steps requested
  bool truncated = false;             // stopped early on a rank-deficient column

  std::size_t steps() const noexcept { return selected.size(); }
  /// S_k as an ascending index list.
  std::vector<std::size_t> support_at(std::size_t k) const;
};

enum class EstimateStatus { ok, empty_selection, exhausted };

std::string_view to_string(EstimateStatus status);

struct SupportEstimate {
  std::vector<std::size_t> support;  // ascending, 0-based
  std::size_t k_selected = 0;
  EstimateStatus status = EstimateStatus::ok;
};

/// Runs k_max greedy steps (OMP: max |X_tᵀ r|, OLS: max residual-energy drop),
/// ties going to the smallest column index. A rank-deficient step ends the
/// path early with `truncated` set instead of throwing. The path also ends,
/// untruncated, once ‖r^k‖ <= 1e-12 ‖y‖.
SolutionPath solution_path(const DenseMatrix& x, std::span<const double> y, std::size_t k_max,
                           GreedyRule rule);
SolutionPath solution_path(const DesignMatrix& design, std::span<const double> y,
                           std::size_t k_max, GreedyRule rule);

/// ⌊(n+1)/2⌋.
std::size_t default_kmax(std::size_t n);

/// S_{k0}. Throws K0ExceedsPath when k0 > path.steps().
SupportEstimate stop_fixed(const SolutionPath& path, std::size_t k0);

/// σ √(n + 2√(n ln n)), times σ^{-η} when η is given.
double rpsc_threshold(double sigma, std::size_t n, std::optional<double> eta = std::nullopt);
/// σ √(2 ln p), times σ^{-η} when η is given.
double rcsc_threshold(double sigma, std::size_t p, std::optional<double> eta = std::nullopt);

/// Smallest k with ‖r^k‖₂ <= τ; `exhausted` with S_K when none qualifies.
SupportEstimate stop_rpsc(const SolutionPath& path, double sigma, std::size_t n,
                          std::optional<double> eta = std::nullopt);
/// Smallest k with ‖Xᵀ r^k‖_∞ <= τ; `exhausted` with S_K when none qualifies.
SupportEstimate stop_rcsc(const SolutionPath& path, double sigma, std::size_t p,
                          std::optional<double> eta = std::nullopt);

}  // namespace rrsel
