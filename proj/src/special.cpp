#include "rrsel/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rrsel/error.hpp"

namespace rrsel {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// std::lgamma writes the global signgam; the reentrant form is safe in workers.
double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// ln Γ(x) - [(x - 1/2) ln x - x + ln(2π)/2] for x >= 10 (Stirling series).
double stirling_correction(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv *
         (1.0 / 12.0 +
          inv2 * (-1.0 / 360.0 +
                  inv2 * (1.0 / 1260.0 +
                          inv2 * (-1.0 / 1680.0 +
                                  inv2 * (1.0 / 1188.0 +
                                          inv2 * (-691.0 / 360360.0 + inv2 * (1.0 / 156.0)))))));
}

// Lentz evaluation of the incomplete Beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const int max_iter = 10000 + static_cast<int>(10.0 * std::sqrt(std::max(a, b)));

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return h;
}

// ln I_x(a,b) through the direct continued fraction, with x = exp(log_x).
// Accurate when x <= (a+1)/(a+b+2); valid for x far below the double range.
double log_cdf_direct(double a, double b, double log_x, double log_beta) {
  const double x = std::exp(log_x);
  const double log_front = a * log_x + b * std::log1p(-x) - log_beta - std::log(a);
  return log_front + std::log(beta_continued_fraction(a, b, x));
}

bool use_direct(double a, double b, double x) { return x <= (a + 1.0) / (a + b + 2.0); }

double log_cdf_from_log_x(double a, double b, double log_x, double log_beta_ab) {
  if (log_x == kNegInf) return kNegInf;
  if (log_x >= 0.0) return 0.0;
  const double x = std::exp(log_x);
  if (use_direct(a, b, x)) return log_cdf_direct(a, b, log_x, log_beta_ab);
  const double upper = std::exp(log_cdf_direct(b, a, std::log1p(-x), log_beta_ab));
  return std::log1p(-upper);
}

// Solves ln I_x(a,b) = ln z for t = ln x by bracketed Newton in the log
// domain with a bisection safeguard. Intended for the lower tail z <= 1/2.
double solve_lower_tail_log(double a, double b, double z) {
  const double log_beta_ab = log_beta_fn({a, b});
  const double log_z = std::log(z);
  auto h = [&](double t) { return log_cdf_from_log_x(a, b, t, log_beta_ab) - log_z; };

  // Leading term of the series of F⁻¹ at z = 0: x ≈ (a z B(a,b))^{1/a}.
  double t = std::min((std::log(a) + log_z + log_beta_ab) / a, std::log(0.5));

  double hi = 0.0;  // h(0) = -ln z > 0
  double lo = kNegInf;
  double ht = h(t);
  if (ht >= 0.0) {
    hi = t;
    double step = 1.0;
    double probe = t - step;
    double hp = h(probe);
    while (hp >= 0.0) {
      hi = probe;
      step *= 2.0;
      probe = t - step;
      if (probe < -1e6) return kNegInf;
      hp = h(probe);
    }
    lo = probe;
    t = probe;
    ht = hp;
  } else {
    lo = t;
  }

  for (int iter = 0; iter < 200 && ht != 0.0; ++iter) {
    if (ht > 0.0) {
      hi = std::min(hi, t);
    } else {
      lo = std::max(lo, t);
    }
    const double log_slope = a * t + (b - 1.0) * std::log1p(-std::exp(t)) - log_beta_ab -
                             (ht + log_z);
    const double slope = std::exp(log_slope);
    double next = t - ht / slope;
    if (!std::isfinite(next) || next <= lo || next >= hi) {
      next = std::isfinite(lo) ? 0.5 * (lo + hi) : hi - 2.0 * std::max(1.0, std::abs(hi));
    }
    const double delta = std::abs(next - t);
    t = next;
    ht = h(t);
    if (delta <= 1e-15 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

void check_probability(double z, const char* what) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw Error(ErrorCode::DomainError, std::string(what) + " must lie in [0,1], got " +
                                            std::to_string(z));
  }
}

}  // namespace

void BetaParams::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::DomainError, "Beta parameters must be positive, got a=" +
                                            std::to_string(a) + " b=" + std::to_string(b));
  }
}

double log_beta_fn(BetaParams params) {
  params.validate();
  double a = std::max(params.a, params.b);
  double b = std::min(params.a, params.b);
  constexpr double kLarge = 10.0;
  if (b >= kLarge) {
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    return half_log_2pi - 0.5 * std::log(b) - (a - 0.5) * std::log1p(b / a) -
           b * std::log1p(a / b) + stirling_correction(a) + stirling_correction(b) -
           stirling_correction(a + b);
  }
  if (a >= kLarge) {
    // ln Γ(a) - ln Γ(a+b) without forming the two large logs separately.
    const double diff = -(a - 0.5) * std::log1p(b / a) - b * std::log(a + b) + b +
                        stirling_correction(a) - stirling_correction(a + b);
    return log_gamma(b) + diff;
  }
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_beta_cdf(BetaParams params, double x) {
  params.validate();
  check_probability(x, "x");
  if (x == 0.0) return kNegInf;
  if (x == 1.0) return 0.0;
  return log_cdf_from_log_x(params.a, params.b, std::log(x), log_beta_fn(params));
}

double beta_cdf(BetaParams params, double x) {
  params.validate();
  check_probability(x, "x");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_beta_ab = log_beta_fn(params);
  if (use_direct(params.a, params.b, x)) {
    return std::exp(log_cdf_direct(params.a, params.b, std::log(x), log_beta_ab));
  }
  return 1.0 - std::exp(log_cdf_direct(params.b, params.a, std::log1p(-x), log_beta_ab));
}

double log_beta_cdf_inv(BetaParams params, double z) {
  params.validate();
  check_probability(z, "z");
  if (z == 0.0) return kNegInf;
  if (z == 1.0) return 0.0;
  if (z <= 0.5) return solve_lower_tail_log(params.a, params.b, z);
  return std::log1p(-std::exp(solve_lower_tail_log(params.b, params.a, 1.0 - z)));
}

double beta_cdf_inv(BetaParams params, double z) {
  params.validate();
  check_probability(z, "z");
  if (z == 0.0) return 0.0;
  if (z == 1.0) return 1.0;
  if (z <= 0.5) return std::exp(solve_lower_tail_log(params.a, params.b, z));
  return 1.0 - std::exp(solve_lower_tail_log(params.b, params.a, 1.0 - z));
}

double rrt_threshold(std::size_t n, std::size_t p, std::size_t k_max, double alpha,
                     std::size_t k) {
  if (k >= n) {
    throw Error(ErrorCode::DomainError,
                "k=" + std::to_string(k) + " must be below n=" + std::to_string(n));
  }
  if (k < 1 || k > k_max || k_max >= n || p < k) {
    throw Error(ErrorCode::DomainError, "need 1 <= k <= k_max < n and p >= k (k=" +
                                            std::to_string(k) + ", k_max=" +
                                            std::to_string(k_max) + ", n=" + std::to_string(n) +
                                            ", p=" + std::to_string(p) + ")");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::DomainError, "alpha must lie in (0,1), got " + std::to_string(alpha));
  }
  const double level =
      alpha / (static_cast<double>(k_max) * static_cast<double>(p - k + 1));
  const BetaParams params{0.5 * static_cast<double>(n - k), 0.5};
  return std::exp(0.5 * log_beta_cdf_inv(params, level));
}

ThresholdTable ThresholdTable::truncated(std::size_t count) const {
  ThresholdTable out = *this;
  out.values.resize(std::min(count, values.size()));
  return out;
}

ThresholdTable build_threshold_table(std::size_t n, std::size_t p, std::size_t k_max,
                                     double alpha) {
  return build_threshold_table(n, p, k_max, alpha, k_max);
}

ThresholdTable build_threshold_table(std::size_t n, std::size_t p, std::size_t k_max,
                                     double alpha, std::size_t count) {
  ThresholdTable table{n, p, k_max, alpha, {}};
  count = std::min(count, k_max);
  table.values.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    table.values.push_back(rrt_threshold(n, p, k_max, alpha, k));
  }
  return table;
}

}  // namespace rrsel
