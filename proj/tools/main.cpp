// rrsel command-line front end. Every failure exits nonzero with a single
// diagnostic line on stderr; outputs are written atomically.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rrsel/cli.hpp"
#include "rrsel/error.hpp"

namespace {

using namespace rrsel;

template <typename T>
void optional_option(CLI::App* app, const std::string& flag, std::optional<T>& target,
                     const std::string& help) {
  app->add_option_function<T>(flag, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy sparse recovery with residual-ratio model selection"};
  app.require_subcommand(1);

  // gen-matrix
  auto* gen = app.add_subcommand("gen-matrix", "write a design matrix CSV and JSON sidecar");
  DesignSpec gen_spec;
  std::string gen_kind = "identity_hadamard";
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "identity_hadamard | gaussian")->capture_default_str();
  gen->add_option("--n", gen_spec.n, "rows")->required();
  gen->add_option("--p", gen_spec.p, "columns (gaussian only; default 2n)");
  gen->add_option("--seed", gen_spec.seed, "RNG seed (gaussian)");
  gen->add_flag("--normalize", gen_spec.normalize, "rescale gaussian columns to unit norm");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  // threshold
  auto* thr = app.add_subcommand("threshold", "print RRT thresholds as CSV (k, gamma)");
  std::size_t thr_n = 0, thr_p = 0;
  std::optional<std::size_t> thr_kmax;
  double thr_alpha = kDefaultAlpha;
  thr->add_option("--n", thr_n, "rows")->required();
  thr->add_option("--p", thr_p, "columns")->required();
  optional_option(thr, "--kmax", thr_kmax, "path length (default floor((n+1)/2))");
  thr->add_option("--alpha", thr_alpha, "RRT level")->capture_default_str();

  // recover
  auto* rec = app.add_subcommand("recover", "estimate the support of one observation");
  cli::RecoverOptions rec_opts;
  std::string rec_rule = "omp";
  rec->add_option("--matrix", rec_opts.matrix_path, "design matrix CSV")->required();
  rec->add_option("--y", rec_opts.y_path, "observation CSV")->required();
  rec->add_option("--method,--stop", rec_opts.method,
                  "fixed:k | rpsc | rcsc | rpsc-hsc:eta | rcsc-hsc:eta | rrt:alpha | rrm | "
                  "rrta:q,pfd")
      ->capture_default_str();
  rec->add_option("--rule", rec_rule, "omp | ols")->capture_default_str();
  optional_option(rec, "--sigma", rec_opts.sigma, "noise level (rpsc/rcsc rules)");
  optional_option(rec, "--kmax", rec_opts.k_max, "path length");
  optional_option(rec, "--alpha", rec_opts.alpha, "override rrt alpha");
  optional_option(rec, "--eta", rec_opts.eta, "override hsc eta");
  optional_option(rec, "--q", rec_opts.q, "override rrta q");
  optional_option(rec, "--pfd", rec_opts.pfd, "override rrta pfd");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "regularity report for a design matrix");
  cli::DiagnoseOptions diag_opts;
  std::string diag_support;
  diag->add_option("--matrix", diag_opts.matrix_path, "design matrix CSV")->required();
  diag->add_option("--support", diag_support, "1-based support, e.g. 1,5,9");
  diag->add_option("--ric-order", diag_opts.max_ric_order, "largest brute-force RIC order")
      ->capture_default_str();
  optional_option(diag, "--kmax", diag_opts.k_max, "path length for thresholds");
  diag->add_option("--alpha", diag_opts.alpha, "RRT level")->capture_default_str();
  diag->add_option("--sigma", diag_opts.sigma, "noise level")->capture_default_str();
  diag->add_option("--beta-min", diag_opts.beta_min, "smallest |beta_j| on the support");
  diag->add_option("--beta-max", diag_opts.beta_max, "largest |beta_j| on the support");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a Monte-Carlo sweep from a JSON config");
  std::string sim_config, sim_out;
  std::size_t threads = 1;
  sim->add_option("--config", sim_config, "experiment JSON")->required();
  sim->add_option("--out", sim_out, "output CSV path")->required();
  sim->add_option("--threads", threads, "worker threads")->capture_default_str();

  // figure
  auto* fig = app.add_subcommand("figure", "run a built-in figure preset");
  std::string fig_name, fig_out = ".";
  std::size_t fig_trials = 1000;
  Seed fig_seed = cli::kDefaultRootSeed;
  fig->add_option("name", fig_name, "fig1_hadamard | fig1_gaussian | fig2_hadamard | "
                                    "fig2_gaussian | fig3_q_sweep")
      ->required();
  fig->add_option("--trials", fig_trials, "trials per SNR point")->capture_default_str();
  fig->add_option("--out", fig_out, "output directory")->capture_default_str();
  fig->add_option("--root-seed", fig_seed, "root seed")->capture_default_str();
  fig->add_option("--threads", threads, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "rrsel: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) {
      gen_spec.kind = parse_design_kind(gen_kind);
      if (gen->count("--p") == 0) gen_spec.p = 2 * gen_spec.n;
      if (gen_spec.kind == DesignKind::external) {
        throw Error(ErrorCode::ValidationError, "gen-matrix cannot generate external designs");
      }
      const auto sidecar = cli::cmd_gen_matrix(gen_spec, gen_out);
      std::cout << gen_out << "\n" << sidecar.string() << "\n";
    } else if (thr->parsed()) {
      const std::size_t k_max = thr_kmax.value_or((thr_n + 1) / 2);
      std::cout << cli::cmd_threshold(thr_n, thr_p, k_max, thr_alpha);
    } else if (rec->parsed()) {
      rec_opts.rule = parse_greedy_rule(rec_rule);
      std::cout << cli::cmd_recover(rec_opts);
    } else if (diag->parsed()) {
      if (!diag_support.empty()) diag_opts.support = cli::parse_index_list(diag_support);
      std::cout << cli::cmd_diagnose(diag_opts);
    } else if (sim->parsed()) {
      const SweepResult r = cli::cmd_simulate(sim_config, sim_out, threads);
      std::cout << sim_out << " (" << r.rows.size() << " rows, digest " << r.config_digest
                << ")\n";
    } else if (fig->parsed()) {
      for (const auto& path : cli::cmd_figure(fig_name, fig_trials, fig_out, fig_seed, threads)) {
        std::cout << path.string() << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "rrsel: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
