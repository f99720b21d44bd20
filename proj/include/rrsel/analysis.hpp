#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrsel/linalg.hpp"

namespace rrsel {

/// max_{j≠k} |⟨x_j, x_k⟩| / (‖x_j‖ ‖x_k‖). Requires p >= 2 and nonzero columns.
double mutual_incoherence(const DenseMatrix& x);

/// Largest k0 with μ < 1/(2 k0 - 1); p when μ = 0.
std::size_t mic_max_k0(double mu, std::size_t p);

/// Eigenvalues (ascending) of a symmetric matrix via Householder
/// tridiagonalization and implicit QL. Only the lower triangle is read.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& sym);

/// Exhaustive RIC δ_order = max_T max(1 - λ_min(X_TᵀX_T), λ_max(X_TᵀX_T) - 1).
/// Throws TooManySubsets when C(p, order) exceeds kMaxRicSubsets.
inline constexpr double kMaxRicSubsets = 1e6;
double ric_bruteforce(const DenseMatrix& x, std::size_t order);

/// max_{j∉S} ‖X_S^† x_j‖₁. Throws RankDeficient when X_S loses rank.
double erc_constant(const DenseMatrix& x, const std::vector<std::size_t>& support);

/// Smallest singular value of X_S.
double min_singular_value(const DenseMatrix& x, const std::vector<std::size_t>& support);

struct RegularityReport {
  double mu = 0.0;
  std::size_t mic_max_k0 = 0;
  std::optional<double> erc_constant;
  std::optional<double> min_singular_value;  // σ_min(X_S), when a support is given
  std::map<std::size_t, double> ric;         // order -> δ
  std::vector<std::string> notes;
};

/// μ, the MIC sparsity limit, RIC up to `max_ric_order` (orders whose subset
/// count exceeds the guard are skipped with a note), and ERC data when a
/// support is supplied.
RegularityReport regularity_report(const DenseMatrix& x,
                                   const std::optional<std::vector<std::size_t>>& support,
                                   std::size_t max_ric_order);

struct EpsilonInputs {
  double delta_k0 = 0.0;
  double delta_k0p1 = 0.0;
  double beta_min = 1.0;
  double beta_max = 1.0;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t k_max = 0;
  double alpha = 0.1;
  double sigma = 0.0;
  std::size_t k0 = 1;
};

struct EpsilonBounds {
  double eps_omp = 0.0;
  double eps_rrt = 0.0;
  double eps_rrt_tilde = 0.0;
  double eps_rrm = 0.0;
  double eps_sigma = 0.0;
  std::vector<std::string> notes;
};

/// Closed-form noise levels below which OMP(k0), RRT and RRM recover S.
/// Thresholds Γ(k) come from build_threshold_table(n, p, k_max, alpha).
EpsilonBounds epsilon_bounds(const EpsilonInputs& in);
/// Same, with Γ(k0) and min_k Γ(k) supplied directly.
EpsilonBounds epsilon_bounds(const EpsilonInputs& in, double gamma_k0, double gamma_min);

/// α / (k_max (p - k0)): high-SNR floor on P(RRT picks a strict superset).
double rrt_error_lower_bound(double alpha, std::size_t k_max, std::size_t p, std::size_t k0);

}  // namespace rrsel
