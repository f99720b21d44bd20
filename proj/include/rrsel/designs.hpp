#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "rrsel/linalg.hpp"

namespace rrsel {

using Seed = std::uint64_t;
using Support = std::vector<std::size_t>;  // 0-based, ascending

enum class DesignKind { identity_hadamard, gaussian, external };

std::string_view to_string(DesignKind kind);
DesignKind parse_design_kind(std::string_view name);

/// A sensing matrix plus how it was made.
struct DesignMatrix {
  DenseMatrix matrix;
  DesignKind kind = DesignKind::external;
  bool unit_norm_columns = false;

  std::size_t n() const noexcept { return matrix.rows(); }
  std::size_t p() const noexcept { return matrix.cols(); }
};

enum class SignalKind { pm_one, geometric };

std::string_view to_string(SignalKind kind);
SignalKind parse_signal_kind(std::string_view name);

struct SignalSpec {
  std::size_t k0 = 1;
  SignalKind kind = SignalKind::pm_one;
  double ratio = 1.0 / 3.0;  // geometric only

  /// Throws DomainError on k0 == 0 or a geometric ratio outside (0,1).
  void validate() const;
};

/// One synthetic regression instance y = Xβ + w.
struct SparseProblem {
  Support true_support;
  Vector beta;
  double sigma = 0.0;
  Vector noise;
  Vector observation;
  double snr = 0.0;  // ‖Xβ‖² / (n σ²)
};

/// [I_n, H_n/√n] with H_n the Sylvester Hadamard matrix; n must be a power of two.
DesignMatrix make_identity_hadamard(std::size_t n);

/// i.i.d. N(0, 1/n) entries, optionally rescaled to unit-norm columns.
DesignMatrix make_gaussian(std::size_t n, std::size_t p, Seed seed, bool normalize);

/// Wraps a user matrix; unit_norm_columns is detected to 1e-10.
DesignMatrix make_external(DenseMatrix matrix);

/// Uniform k0-subset of {0..p-1}, returned ascending. Throws K0TooLarge.
Support sample_support(std::size_t p, std::size_t k0, Seed seed);

/// β with the spec's nonzero pattern on `support`, zero elsewhere.
Vector make_signal(std::size_t p, const Support& support, const SignalSpec& spec, Seed seed);

/// Draws noise so that ‖Xβ‖² / (n σ²) equals `snr` for this realization.
SparseProblem synthesize(const DesignMatrix& design, const Vector& beta, const Support& support,
                         double snr, Seed seed);

/// max |β_j| / min |β_j| over the support.
double dynamic_range(const Vector& beta, const Support& support);

}  // namespace rrsel
