#include "rrsel/designs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "rrsel/error.hpp"

namespace rrsel {

std::string_view to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::identity_hadamard: return "identity_hadamard";
    case DesignKind::gaussian: return "gaussian";
    case DesignKind::external: return "external";
  }
  return "external";
}

DesignKind parse_design_kind(std::string_view name) {
  if (name == "identity_hadamard") return DesignKind::identity_hadamard;
  if (name == "gaussian") return DesignKind::gaussian;
  if (name == "external") return DesignKind::external;
  throw Error(ErrorCode::ValidationError,
              "unknown design kind '" + std::string(name) +
                  "' (expected identity_hadamard, gaussian or external)");
}

std::string_view to_string(SignalKind kind) {
  return kind == SignalKind::pm_one ? "pm_one" : "geometric";
}

SignalKind parse_signal_kind(std::string_view name) {
  if (name == "pm_one") return SignalKind::pm_one;
  if (name == "geometric") return SignalKind::geometric;
  throw Error(ErrorCode::ValidationError,
              "unknown signal kind '" + std::string(name) + "' (expected pm_one or geometric)");
}

void SignalSpec::validate() const {
  if (k0 == 0) throw Error(ErrorCode::DomainError, "signal sparsity k0 must be >= 1");
  if (kind == SignalKind::geometric && !(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::DomainError,
                "geometric ratio must lie in (0,1), got " + std::to_string(ratio));
  }
}

DesignMatrix make_identity_hadamard(std::size_t n) {
  if (n == 0 || !std::has_single_bit(n)) {
    throw Error(ErrorCode::NotPowerOfTwo, "n=" + std::to_string(n) + " is not a power of two");
  }
  DenseMatrix x(n, 2 * n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    x(i, i) = 1.0;
    // Sylvester construction: H(i,j) = (-1)^{popcount(i & j)}.
    for (std::size_t j = 0; j < n; ++j) {
      x(i, n + j) = (std::popcount(i & j) % 2 == 0 ? 1.0 : -1.0) * scale;
    }
  }
  return {std::move(x), DesignKind::identity_hadamard, true};
}

DesignMatrix make_gaussian(std::size_t n, std::size_t p, Seed seed, bool normalize) {
  if (n == 0 || p == 0) throw Error(ErrorCode::DomainError, "gaussian design needs n, p >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  DenseMatrix x(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    auto col = x.column(j);
    for (double& v : col) v = normal(rng);
    if (normalize) {
      const double nrm = norm2(col);
      for (double& v : col) v /= nrm;
    }
  }
  return {std::move(x), DesignKind::gaussian, normalize};
}

DesignMatrix make_external(DenseMatrix matrix) {
  bool unit = matrix.cols() > 0;
  for (std::size_t j = 0; j < matrix.cols() && unit; ++j) {
    unit = std::abs(norm2(matrix.column(j)) - 1.0) <= 1e-10;
  }
  return {std::move(matrix), DesignKind::external, unit};
}

Support sample_support(std::size_t p, std::size_t k0, Seed seed) {
  if (k0 > p) {
    throw Error(ErrorCode::K0TooLarge,
                "k0=" + std::to_string(k0) + " exceeds p=" + std::to_string(p));
  }
  std::vector<std::size_t> all(p);
  std::iota(all.begin(), all.end(), std::size_t{0});
  Support out;
  out.reserve(k0);
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(out), k0, rng);
  std::sort(out.begin(), out.end());
  return out;
}

Vector make_signal(std::size_t p, const Support& support, const SignalSpec& spec, Seed seed) {
  spec.validate();
  if (support.size() != spec.k0) {
    throw Error(ErrorCode::SpecMismatch, "support has " + std::to_string(support.size()) +
                                             " entries but k0=" + std::to_string(spec.k0));
  }
  Vector beta(p, 0.0);
  std::mt19937_64 rng(seed);
  if (spec.kind == SignalKind::pm_one) {
    std::bernoulli_distribution coin(0.5);
    for (std::size_t j : support) {
      if (j >= p) throw Error(ErrorCode::IndexOutOfRange, "support index " + std::to_string(j));
      beta[j] = coin(rng) ? 1.0 : -1.0;
    }
    return beta;
  }
  Vector magnitudes(spec.k0);
  double v = 1.0;
  for (double& m : magnitudes) {
    m = v;
    v *= spec.ratio;
  }
  std::shuffle(magnitudes.begin(), magnitudes.end(), rng);
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] >= p) {
      throw Error(ErrorCode::IndexOutOfRange, "support index " + std::to_string(support[i]));
    }
    beta[support[i]] = magnitudes[i];
  }
  return beta;
}

SparseProblem synthesize(const DesignMatrix& design, const Vector& beta, const Support& support,
                         double snr, Seed seed) {
  if (!(snr > 0.0) || !std::isfinite(snr)) {
    throw Error(ErrorCode::DomainError, "snr must be positive and finite");
  }
  if (beta.size() != design.p()) {
    throw Error(ErrorCode::DimensionMismatch, "beta length " + std::to_string(beta.size()) +
                                                  " vs p=" + std::to_string(design.p()));
  }
  std::vector<bool> on_support(design.p(), false);
  for (std::size_t j : support) {
    if (j >= design.p()) {
      throw Error(ErrorCode::IndexOutOfRange, "support index " + std::to_string(j));
    }
    on_support[j] = true;
  }
  for (std::size_t j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0 && !on_support[j]) {
      throw Error(ErrorCode::SpecMismatch,
                  "beta is nonzero at " + std::to_string(j) + " outside the support");
    }
  }

  const Vector clean = multiply(design.matrix, beta);
  const double signal_norm = norm2(clean);
  if (signal_norm == 0.0) throw Error(ErrorCode::ZeroSignal, "X·beta is identically zero");

  const auto n = static_cast<double>(design.n());
  SparseProblem out;
  out.true_support = support;
  std::sort(out.true_support.begin(), out.true_support.end());
  out.beta = beta;
  out.sigma = signal_norm / std::sqrt(n * snr);
  out.snr = snr;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, out.sigma);
  out.noise.resize(design.n());
  for (double& w : out.noise) w = normal(rng);
  out.observation.resize(design.n());
  for (std::size_t i = 0; i < design.n(); ++i) out.observation[i] = clean[i] + out.noise[i];
  return out;
}

double dynamic_range(const Vector& beta, const Support& support) {
  if (support.empty()) return 1.0;
  double lo = std::abs(beta.at(support.front()));
  double hi = lo;
  for (std::size_t j : support) {
    lo = std::min(lo, std::abs(beta.at(j)));
    hi = std::max(hi, std::abs(beta.at(j)));
  }
  return hi / lo;
}

}  // namespace rrsel
