#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrsel/simulate.hpp"

namespace rrsel::cli {

inline constexpr Seed kDefaultRootSeed = 20170101;

/// fig1_hadamard, fig1_gaussian, fig2_hadamard, fig2_gaussian, fig3_q_sweep.
std::vector<std::string> figure_names();

/// The built-in sweep behind a named figure. Throws ValidationError on an
/// unknown name.
ExperimentConfig figure_config(std::string_view name, std::size_t trials,
                               Seed root_seed = kDefaultRootSeed);

/// Runs a figure preset and writes <out_dir>/<name>.csv (sweep rows) and
/// <out_dir>/<name>_plot.csv (snr_db, algorithm, pe). Returns the paths.
std::vector<std::filesystem::path> cmd_figure(std::string_view name, std::size_t trials,
                                              const std::filesystem::path& out_dir,
                                              Seed root_seed = kDefaultRootSeed,
                                              std::size_t threads = 1);

/// Runs a JSON config and writes the sweep CSV to `out`.
SweepResult cmd_simulate(const std::filesystem::path& config_path,
                         const std::filesystem::path& out, std::size_t threads = 1);

/// CSV with columns k, gamma for k = 1..k_max.
std::string cmd_threshold(std::size_t n, std::size_t p, std::size_t k_max, double alpha);

/// Writes the matrix CSV and a JSON sidecar next to it (same stem, .json).
/// Returns the sidecar path.
std::filesystem::path cmd_gen_matrix(const DesignSpec& spec, const std::filesystem::path& out);

struct RecoverOptions {
  std::filesystem::path matrix_path;
  std::filesystem::path y_path;
  std::string method = "rrm";
  GreedyRule rule = GreedyRule::omp;
  std::optional<double> sigma;
  std::optional<std::size_t> k_max;
  std::optional<double> alpha;
  std::optional<double> eta;
  std::optional<double> q;
  std::optional<double> pfd;
};

/// JSON: {support (1-based), k_selected, status, residual_norm, rr_values}.
std::string cmd_recover(const RecoverOptions& opts);

struct DiagnoseOptions {
  std::filesystem::path matrix_path;
  std::optional<std::vector<std::size_t>> support;  // 1-based
  std::size_t max_ric_order = 2;
  std::optional<std::size_t> k_max;
  double alpha = kDefaultAlpha;
  double sigma = 0.0;
  double beta_min = 1.0;
  double beta_max = 1.0;
};

/// JSON regularity report; epsilon bounds are added when a support is given
/// and its RIC values are computable.
std::string cmd_diagnose(const DiagnoseOptions& opts);

/// "1,4,7" -> {1,4,7}. Throws ParseError.
std::vector<std::size_t> parse_index_list(std::string_view text);

}  // namespace rrsel::cli
