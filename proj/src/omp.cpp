#include "rrsel/omp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rrsel/error.hpp"

namespace rrsel {

std::string_view to_string(GreedyRule rule) { return rule == GreedyRule::omp ? "omp" : "ols"; }

GreedyRule parse_greedy_rule(std::string_view name) {
  if (name == "omp") return GreedyRule::omp;
  if (name == "ols") return GreedyRule::ols;
  throw Error(ErrorCode::ValidationError,
              "unknown rule '" + std::string(name) + "' (expected omp or ols)");
}

std::string_view to_string(EstimateStatus status) {
  switch (status) {
    case EstimateStatus::ok: return "ok";
    case EstimateStatus::empty_selection: return "empty_selection";
    case EstimateStatus::exhausted: return "exhausted";
  }
  return "ok";
}

std::vector<std::size_t> SolutionPath::support_at(std::size_t k) const {
  if (k > selected.size()) {
    throw Error(ErrorCode::K0ExceedsPath, "k=" + std::to_string(k) + " beyond path length " +
                                              std::to_string(selected.size()));
  }
  std::vector<std::size_t> s(selected.begin(), selected.begin() + static_cast<long>(k));
  std::sort(s.begin(), s.end());
  return s;
}

namespace {

// Index of the best unselected column; `score` is maximized, ties go low.
template <typename Score>
std::optional<std::size_t> argmax_unselected(std::size_t p, const std::vector<bool>& taken,
                                             Score score) {
  std::optional<std::size_t> best;
  double best_score = -1.0;
  for (std::size_t j = 0; j < p; ++j) {
    if (taken[j]) continue;
    const double s = score(j);
    if (!(s >= 0.0)) continue;  // NaN guard for degenerate candidates
    if (s > best_score) {
      best_score = s;
      best = j;
    }
  }
  return best;
}

}  // namespace

SolutionPath solution_path(const DenseMatrix& x, std::span<const double> y, std::size_t k_max,
                           GreedyRule rule) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "observation length " + std::to_string(y.size()) +
                                                  " vs n=" + std::to_string(n));
  }
  if (k_max < 1 || n < 2 || k_max > std::min(n - 1, p)) {
    throw Error(ErrorCode::DomainError, "k_max=" + std::to_string(k_max) +
                                            " must lie in [1, min(n-1, p)] for n=" +
                                            std::to_string(n) + ", p=" + std::to_string(p));
  }
  if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::NonFinite, "observation contains NaN or Inf");
  }

  SolutionPath path;
  path.rule = rule;
  path.k_max = k_max;
  path.selected.reserve(k_max);

  OrthoBasis basis(n);
  Vector residual(y.begin(), y.end());
  Vector corr = multiply_transpose(x, residual);
  path.residual_norms.push_back(norm2(residual));
  path.residual_corr_inf.push_back(norm_inf(corr));

  std::vector<bool> taken(p, false);
  // Once y is fit exactly every further pick is arbitrary, so the path ends.
  const double fit_floor = OrthoBasis::kRankTolerance * path.residual_norms.front();
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (path.residual_norms.back() <= fit_floor) break;
    std::optional<std::size_t> pick;
    if (rule == GreedyRule::omp) {
      pick = argmax_unselected(p, taken, [&](std::size_t j) { return std::abs(corr[j]); });
    } else {
      // Energy drop from adding j is ⟨x_j, r⟩² / ‖(I - P) x_j‖²; columns already
      // in the span (numerically) cannot be added and are skipped.
      pick = argmax_unselected(p, taken, [&](std::size_t j) {
        const auto col = x.column(j);
        const double col_norm = norm2(col);
        const double proj_norm = norm2(basis.project_out(col));
        if (!(proj_norm > OrthoBasis::kRankTolerance * col_norm)) return -1.0;
        const double c = corr[j] / proj_norm;
        return c * c;
      });
    }
    if (!pick) {
      path.truncated = true;
      break;
    }
    try {
      basis.append(x, *pick);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      path.truncated = true;
      break;
    }
    taken[*pick] = true;
    path.selected.push_back(*pick);
    residual = basis.project_out(y);
    corr = multiply_transpose(x, residual);
    // Exact arithmetic gives a nonincreasing sequence; rounding at the 1e-16
    // level must not break that.
    path.residual_norms.push_back(std::min(norm2(residual), path.residual_norms.back()));
    path.residual_corr_inf.push_back(norm_inf(corr));
  }

  if (!basis.empty()) path.coeffs_final = basis.least_squares_coeffs(y);
  return path;
}

SolutionPath solution_path(const DesignMatrix& design, std::span<const double> y,
                           std::size_t k_max, GreedyRule rule) {
  return solution_path(design.matrix, y, k_max, rule);
}

std::size_t default_kmax(std::size_t n) { return (n + 1) / 2; }

SupportEstimate stop_fixed(const SolutionPath& path, std::size_t k0) {
  if (k0 > path.steps()) {
    throw Error(ErrorCode::K0ExceedsPath, "k0=" + std::to_string(k0) + " exceeds path length " +
                                              std::to_string(path.steps()));
  }
  return {path.support_at(k0), k0, EstimateStatus::ok};
}

namespace {

double hsc_scale(double sigma, std::optional<double> eta) {
  return eta ? std::pow(sigma, -*eta) : 1.0;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::DomainError, "sigma must be positive and finite");
  }
}

SupportEstimate first_below(const SolutionPath& path, const Vector& stat, double tau) {
  for (std::size_t k = 0; k < stat.size(); ++k) {
    if (stat[k] <= tau) return {path.support_at(k), k, EstimateStatus::ok};
  }
  const std::size_t last = path.steps();
  return {path.support_at(last), last, EstimateStatus::exhausted};
}

}  // namespace

double rpsc_threshold(double sigma, std::size_t n, std::optional<double> eta) {
  check_sigma(sigma);
  const auto nd = static_cast<double>(n);
  return sigma * hsc_scale(sigma, eta) * std::sqrt(nd + 2.0 * std::sqrt(nd * std::log(nd)));
}

double rcsc_threshold(double sigma, std::size_t p, std::optional<double> eta) {
  check_sigma(sigma);
  return sigma * hsc_scale(sigma, eta) * std::sqrt(2.0 * std::log(static_cast<double>(p)));
}

SupportEstimate stop_rpsc(const SolutionPath& path, double sigma, std::size_t n,
                          std::optional<double> eta) {
  return first_below(path, path.residual_norms, rpsc_threshold(sigma, n, eta));
}

SupportEstimate stop_rcsc(const SolutionPath& path, double sigma, std::size_t p,
                          std::optional<double> eta) {
  return first_below(path, path.residual_corr_inf, rcsc_threshold(sigma, p, eta));
}

}  // namespace rrsel
