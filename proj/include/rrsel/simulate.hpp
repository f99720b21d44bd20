#pragma once

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrsel/designs.hpp"
#include "rrsel/omp.hpp"
#include "rrsel/selectors.hpp"
#include "rrsel/special.hpp"

namespace rrsel {

enum class AlgorithmFamily { fixed_k0, rpsc, rcsc, rpsc_hsc, rcsc_hsc, rrt, rrm, rrta };

std::string_view to_string(AlgorithmFamily family);

/// The eight selector families, each usable with either greedy rule.
std::vector<AlgorithmFamily> supported_roster();

inline constexpr double kDefaultEta = 0.1;
inline constexpr double kDefaultAlpha = 0.1;

/// A stopping rule or selector applied to a greedy path.
struct AlgorithmSpec {
  AlgorithmFamily family = AlgorithmFamily::rrm;
  GreedyRule rule = GreedyRule::omp;
  double eta = kDefaultEta;      // rpsc_hsc, rcsc_hsc
  double alpha = kDefaultAlpha;  // rrt
  RrtaParams rrta;               // rrta
  std::optional<std::size_t> fixed_k;  // fixed_k0 with an explicit k; else the true k0

  /// Stable display name, e.g. "rrt(alpha=0.01)" or "rrta(q=2;pfd=0.1)".
  std::string label() const;
  /// Throws ValidationError on out-of-range parameters.
  void validate() const;
};

/// Parses "name[:params]": fixed_k0, fixed:K, rpsc, rcsc, rpsc_hsc[:eta],
/// rcsc_hsc[:eta], rrt[:alpha], rrm, rrta[:q[,pfd]]. '-' and '_' are
/// interchangeable in names. Throws ValidationError listing the roster.
AlgorithmSpec parse_algorithm(std::string_view text, GreedyRule rule = GreedyRule::omp);

/// Side information an algorithm may read. RR selectors only use n, p, k_max.
struct AlgorithmContext {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t k_max = 0;
  std::optional<double> sigma;   // known-σ rules only
  std::optional<std::size_t> k0; // fixed_k0 only
  const ThresholdTable* rrt_table = nullptr;  // optional cache for rrt
};

SupportEstimate apply_algorithm(const AlgorithmSpec& algo, const SolutionPath& path,
                                const AlgorithmContext& ctx);

struct DesignSpec {
  DesignKind kind = DesignKind::identity_hadamard;
  std::size_t n = 32;
  std::size_t p = 64;
  Seed seed = 0;
  bool normalize = false;
  std::string path;  // external matrices only
};

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  DesignSpec design;
  SignalSpec signal;
  std::vector<double> snr_db;
  std::size_t trials = 1;
  std::vector<AlgorithmSpec> algorithms;
  Seed root_seed = 0;
  std::optional<std::size_t> k_max_override;
  bool regenerate_matrix_per_trial = false;

  std::size_t k_max() const;
  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Builds the configured design; `seed` overrides design.seed (per-trial redraws).
DesignMatrix build_design(const DesignSpec& spec, std::optional<Seed> seed = std::nullopt);

/// SplitMix64-style mixing of (root, snr_index, trial_index).
Seed derive_trial_seed(Seed root_seed, std::size_t snr_index, std::size_t trial_index);

inline double snr_from_db(double db) { return std::pow(10.0, db / 10.0); }

struct AlgorithmOutcome {
  SupportEstimate estimate;
  bool exact = false;
  bool false_discovery = false;
  long card_error = 0;  // |Ŝ| - |S|
};

struct TrialRecord {
  std::size_t trial_index = 0;
  double snr_db = 0.0;
  Support true_support;
  std::vector<AlgorithmOutcome> outcomes;  // parallel to config.algorithms
};

/// Everything a trial draws from its seed.
struct TrialProblem {
  std::shared_ptr<const DesignMatrix> design;
  SparseProblem problem;
};

/// Holds the per-sweep state shared by all trials: the fixed design (when not
/// redrawn) and cached RRT thresholds. Const methods are safe to call from
/// several threads.
class TrialRunner {
 public:
  explicit TrialRunner(ExperimentConfig config);
  TrialRunner(ExperimentConfig config, std::shared_ptr<const DesignMatrix> fixed_design);

  const ExperimentConfig& config() const noexcept { return config_; }

  TrialProblem problem(std::size_t snr_index, std::size_t trial_index) const;
  TrialRecord run(std::size_t snr_index, std::size_t trial_index) const;

 private:
  void prepare();

  ExperimentConfig config_;
  std::shared_ptr<const DesignMatrix> fixed_design_;
  std::map<double, ThresholdTable> rrt_tables_;
};

TrialRecord run_trial(const ExperimentConfig& config, const DesignMatrix& matrix,
                      std::size_t snr_index, std::size_t trial_index);

struct SweepRow {
  double snr_db = 0.0;
  std::string algorithm;  // AlgorithmSpec::label()
  std::string rule;
  std::size_t trials = 0;
  double pe = 0.0;
  double pe_stderr = 0.0;
  double pfd = 0.0;
  double pfd_stderr = 0.0;

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::string experiment_id;
  std::string config_digest;
  std::string design;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t k0 = 0;
  std::string signal_kind;
  std::vector<SweepRow> rows;

  /// Throws IndexOutOfRange when absent.
  const SweepRow& at(double snr_db, std::string_view algorithm,
                     std::string_view rule = "omp") const;
};

/// √(p̂(1-p̂)/trials).
double binomial_stderr(double p_hat, std::size_t trials);

/// Runs every (snr, trial) pair; output does not depend on `threads`.
SweepResult run_sweep(const ExperimentConfig& config, std::size_t threads = 1);

std::string config_digest(const ExperimentConfig& config);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
SweepResult read_sweep_csv(std::istream& in);

}  // namespace rrsel
