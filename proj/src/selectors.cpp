#include "rrsel/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "rrsel/error.hpp"

namespace rrsel {

void RrtaParams::validate() const {
  if (!(pfd_finite > 0.0 && pfd_finite < 1.0)) {
    throw Error(ErrorCode::DomainError,
                "pfd_finite must lie in (0,1), got " + std::to_string(pfd_finite));
  }
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw Error(ErrorCode::DomainError, "q must be positive, got " + std::to_string(q));
  }
}

ResidualRatios residual_ratios(const SolutionPath& path) {
  if (path.steps() == 0) throw Error(ErrorCode::EmptyPath, "path has no greedy steps");
  ResidualRatios out;
  out.values.reserve(path.steps());
  for (std::size_t k = 1; k <= path.steps(); ++k) {
    const double prev = path.residual_norms[k - 1];
    const double cur = path.residual_norms[k];
    // A zero residual already fits y exactly; later ratios count as 0.
    const double rr = prev == 0.0 ? 0.0 : std::clamp(cur / prev, 0.0, 1.0);
    out.values.push_back(rr);
  }
  return out;
}

Selection rrt_select(const ResidualRatios& ratios, const ThresholdTable& thresholds) {
  if (ratios.size() != thresholds.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(ratios.size()) + " ratios vs " +
                                               std::to_string(thresholds.size()) +
                                               " thresholds");
  }
  for (std::size_t k = ratios.size(); k >= 1; --k) {
    if (ratios.at(k) < thresholds.at(k)) return {k, EstimateStatus::ok};
  }
  return {0, EstimateStatus::empty_selection};
}

std::size_t rrm_select(const ResidualRatios& ratios) {
  if (ratios.size() == 0) throw Error(ErrorCode::EmptyPath, "no residual ratios");
  const auto it = std::min_element(ratios.values.begin(), ratios.values.end());
  return static_cast<std::size_t>(it - ratios.values.begin()) + 1;
}

double rrta_alpha(const ResidualRatios& ratios, const RrtaParams& params) {
  params.validate();
  if (ratios.size() == 0) throw Error(ErrorCode::EmptyPath, "no residual ratios");
  const double min_rr = *std::min_element(ratios.values.begin(), ratios.values.end());
  const double adaptive = std::pow(min_rr, params.q);
  return std::max(std::min(params.pfd_finite, adaptive), kMinAlpha);
}

Selection rrta_select(const ResidualRatios& ratios, std::size_t n, std::size_t p,
                      std::size_t k_max, const RrtaParams& params) {
  const double alpha = rrta_alpha(ratios, params);
  const auto table = build_threshold_table(n, p, k_max, alpha, ratios.size());
  return rrt_select(ratios, table);
}

SupportEstimate estimate_from(const SolutionPath& path, Selection selection) {
  return {path.support_at(selection.k), selection.k, selection.status};
}

std::optional<std::size_t> minimal_superset_index(const SolutionPath& path,
                                                  const std::vector<std::size_t>& true_support) {
  std::unordered_set<std::size_t> missing(true_support.begin(), true_support.end());
  if (missing.empty()) return 0;
  for (std::size_t k = 1; k <= path.steps(); ++k) {
    missing.erase(path.selected[k - 1]);
    if (missing.empty()) return k;
  }
  return std::nullopt;
}

}  // namespace rrsel
