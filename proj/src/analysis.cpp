#include "rrsel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rrsel/error.hpp"
#include "rrsel/special.hpp"

namespace rrsel {
namespace {

double binomial(std::size_t p, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(p - k + i) / static_cast<double>(i);
  }
  return c;
}

DenseMatrix gram(const DenseMatrix& x) {
  DenseMatrix g(x.cols(), x.cols());
  for (std::size_t i = 0; i < x.cols(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = dot(x.column(i), x.column(j));
    }
  }
  return g;
}

DenseMatrix sub_gram(const DenseMatrix& g, const std::vector<std::size_t>& idx) {
  DenseMatrix s(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) s(a, b) = g(idx[a], idx[b]);
  }
  return s;
}

void check_support(const DenseMatrix& x, const std::vector<std::size_t>& support) {
  for (std::size_t j : support) {
    if (j >= x.cols()) throw Error(ErrorCode::IndexOutOfRange, "support index " + std::to_string(j));
  }
}

}  // namespace

double mutual_incoherence(const DenseMatrix& x) {
  if (x.cols() < 2) throw Error(ErrorCode::DomainError, "mutual incoherence needs p >= 2");
  std::vector<double> norms(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    norms[j] = norm2(x.column(j));
    if (norms[j] == 0.0) {
      throw Error(ErrorCode::DomainError, "column " + std::to_string(j) + " is zero");
    }
  }
  double mu = 0.0;
  for (std::size_t i = 0; i < x.cols(); ++i) {
    for (std::size_t j = i + 1; j < x.cols(); ++j) {
      mu = std::max(mu, std::abs(dot(x.column(i), x.column(j))) / (norms[i] * norms[j]));
    }
  }
  return mu;
}

std::size_t mic_max_k0(double mu, std::size_t p) {
  if (mu <= 0.0) return p;
  auto k = static_cast<std::size_t>(std::floor((1.0 + 1.0 / mu) / 2.0));
  // μ < 1/(2k-1) is strict; step back on an exact boundary hit.
  while (k > 0 && !(mu * (2.0 * static_cast<double>(k) - 1.0) < 1.0)) --k;
  return std::min(k, p);
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& sym) {
  const std::size_t m = sym.rows();
  if (sym.cols() != m) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  if (m == 0) return {};
  if (m == 2) {
    // Closed form; for unit diagonals this is exactly 1 ± |g|.
    const double mid = 0.5 * (sym(0, 0) + sym(1, 1));
    const double rad = std::hypot(0.5 * (sym(0, 0) - sym(1, 1)), sym(1, 0));
    return {mid - rad, mid + rad};
  }

  DenseMatrix a = sym;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) a(i, j) = a(j, i);
  }

  // Householder reduction to tridiagonal form.
  for (std::size_t k = 0; k + 2 < m; ++k) {
    const std::size_t len = m - k - 1;
    std::vector<double> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = a(k + 1 + i, k);
    const double xnorm = norm2(v);
    if (xnorm == 0.0) continue;
    const double alpha = v[0] > 0.0 ? -xnorm : xnorm;
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm == 0.0) continue;
    for (double& t : v) t /= vnorm;

    // Trailing block B <- H B H with H = I - 2 v vᵀ.
    std::vector<double> w(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = 0; j < len; ++j) w[i] += a(k + 1 + i, k + 1 + j) * v[j];
      w[i] *= 2.0;
    }
    double kappa = 0.0;
    for (std::size_t i = 0; i < len; ++i) kappa += v[i] * w[i];
    for (std::size_t i = 0; i < len; ++i) w[i] -= kappa * v[i];
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = 0; j < len; ++j) {
        a(k + 1 + i, k + 1 + j) -= v[i] * w[j] + w[i] * v[j];
      }
    }
    a(k + 1, k) = a(k, k + 1) = alpha;
    for (std::size_t i = 1; i < len; ++i) a(k + 1 + i, k) = a(k, k + 1 + i) = 0.0;
  }

  std::vector<double> d(m);
  std::vector<double> e(m, 0.0);  // e[i] couples d[i] and d[i+1]
  for (std::size_t i = 0; i < m; ++i) d[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < m; ++i) e[i] = a(i + 1, i);

  // Implicit QL with Wilkinson-style shifts.
  const auto mi = static_cast<long>(m);
  for (long l = 0; l < mi; ++l) {
    int iter = 0;
    long mm = l;
    do {
      for (mm = l; mm < mi - 1; ++mm) {
        const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
        if (std::abs(e[mm]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (mm != l) {
        if (++iter > 60) {
          throw Error(ErrorCode::DomainError, "symmetric eigen-solve did not converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        long i = mm - 1;
        for (; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[mm] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[mm] = 0.0;
      }
    } while (mm != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

double ric_bruteforce(const DenseMatrix& x, std::size_t order) {
  const std::size_t p = x.cols();
  if (order == 0 || order > p) {
    throw Error(ErrorCode::DomainError,
                "RIC order must lie in [1, p], got " + std::to_string(order));
  }
  if (binomial(p, order) > kMaxRicSubsets) {
    throw Error(ErrorCode::TooManySubsets, "C(" + std::to_string(p) + ", " +
                                               std::to_string(order) + ") exceeds 1e6 subsets");
  }
  const DenseMatrix g = gram(x);
  std::vector<std::size_t> idx(order);
  for (std::size_t i = 0; i < order; ++i) idx[i] = i;

  double delta = 0.0;
  while (true) {
    const auto eig = symmetric_eigenvalues(sub_gram(g, idx));
    delta = std::max({delta, 1.0 - eig.front(), eig.back() - 1.0});

    // Next combination in lexicographic order.
    std::size_t pos = order;
    while (pos > 0 && idx[pos - 1] == p - order + (pos - 1)) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t t = pos; t < order; ++t) idx[t] = idx[t - 1] + 1;
  }
  return delta;
}

double erc_constant(const DenseMatrix& x, const std::vector<std::size_t>& support) {
  check_support(x, support);
  OrthoBasis basis(x.rows());
  for (std::size_t j : support) basis.append(x, j);
  std::vector<bool> in_support(x.cols(), false);
  for (std::size_t j : support) in_support[j] = true;

  double worst = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    if (in_support[j]) continue;
    if (basis.empty()) break;
    const Vector c = basis.least_squares_coeffs(x.column(j));
    double l1 = 0.0;
    for (double v : c) l1 += std::abs(v);
    worst = std::max(worst, l1);
  }
  return worst;
}

double min_singular_value(const DenseMatrix& x, const std::vector<std::size_t>& support) {
  check_support(x, support);
  if (support.empty()) throw Error(ErrorCode::EmptyBasis, "empty support");
  const auto eig = symmetric_eigenvalues(gram(select_columns(x, support)));
  return std::sqrt(std::max(0.0, eig.front()));
}

RegularityReport regularity_report(const DenseMatrix& x,
                                   const std::optional<std::vector<std::size_t>>& support,
                                   std::size_t max_ric_order) {
  RegularityReport report;
  report.mu = mutual_incoherence(x);
  report.mic_max_k0 = mic_max_k0(report.mu, x.cols());
  for (std::size_t order = 1; order <= std::min(max_ric_order, x.cols()); ++order) {
    if (binomial(x.cols(), order) > kMaxRicSubsets) {
      report.notes.push_back("ric order " + std::to_string(order) +
                             " skipped: subset count exceeds 1e6");
      break;
    }
    report.ric[order] = ric_bruteforce(x, order);
  }
  if (support && !support->empty()) {
    report.erc_constant = erc_constant(x, *support);
    report.min_singular_value = min_singular_value(x, *support);
    report.notes.push_back(
        "interpretation: the lambda_min in the ERC noise bound is taken as the smallest "
        "singular value of X_S");
  }
  return report;
}

EpsilonBounds epsilon_bounds(const EpsilonInputs& in) {
  if (in.k0 < 1 || in.k0 > in.k_max) {
    throw Error(ErrorCode::DomainError, "epsilon bounds need 1 <= k0 <= k_max");
  }
  const auto table = build_threshold_table(in.n, in.p, in.k_max, in.alpha);
  const double gamma_min = *std::min_element(table.values.begin(), table.values.end());
  return epsilon_bounds(in, table.at(in.k0), gamma_min);
}

EpsilonBounds epsilon_bounds(const EpsilonInputs& in, double gamma_k0, double gamma_min) {
  const bool negative = in.delta_k0 < 0.0 || in.delta_k0p1 < 0.0 || in.beta_min < 0.0 ||
                        in.beta_max < 0.0 || in.sigma < 0.0 || gamma_k0 < 0.0 ||
                        gamma_min < 0.0;
  if (negative) throw Error(ErrorCode::DomainError, "epsilon bounds take nonnegative inputs");
  if (in.delta_k0 >= 1.0 || in.delta_k0p1 >= 1.0) {
    throw Error(ErrorCode::DomainError, "RIC values must be below 1");
  }
  if (in.beta_min == 0.0 || in.beta_max < in.beta_min) {
    throw Error(ErrorCode::DomainError, "need 0 < beta_min <= beta_max");
  }

  EpsilonBounds out;
  const double d0 = in.delta_k0;
  const double d1 = in.delta_k0p1;
  const double root_k = std::sqrt(static_cast<double>(in.k0) + 1.0);

  if (d1 < 1.0 / root_k) {
    out.eps_omp = in.beta_min * std::sqrt(1.0 - d1) * (1.0 - root_k * d1) /
                  (1.0 + std::sqrt(1.0 - d1 * d1) - root_k * d1);
  } else {
    out.notes.push_back("delta_{k0+1} >= 1/sqrt(k0+1): no OMP recovery guarantee, eps_omp = 0");
  }

  const double lower = std::sqrt(1.0 - d0) * in.beta_min;
  out.eps_rrt = gamma_k0 * lower / (1.0 + gamma_k0);
  out.eps_rrt_tilde = gamma_min * lower / (1.0 + gamma_min);
  out.eps_rrm = lower / (1.0 + std::sqrt(1.0 + d0) / std::sqrt(1.0 - d0) *
                                   (2.0 + in.beta_max / in.beta_min));
  if (in.n >= 1) {
    const auto n = static_cast<double>(in.n);
    out.eps_sigma = in.sigma * std::sqrt(n + 2.0 * std::sqrt(n * std::log(n)));
  }
  return out;
}

double rrt_error_lower_bound(double alpha, std::size_t k_max, std::size_t p, std::size_t k0) {
  if (p <= k0) throw Error(ErrorCode::DomainError, "need p > k0");
  if (k_max == 0) throw Error(ErrorCode::DomainError, "need k_max >= 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::DomainError, "alpha must lie in [0,1)");
  }
  return alpha / (static_cast<double>(k_max) * static_cast<double>(p - k0));
}

}  // namespace rrsel
