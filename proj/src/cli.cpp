#include "rrsel/cli.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rrsel/analysis.hpp"
#include "rrsel/config.hpp"
#include "rrsel/csv.hpp"
#include "rrsel/error.hpp"

namespace rrsel::cli {
namespace {

using nlohmann::json;

std::vector<double> snr_grid(double lo, double hi, double step) {
  std::vector<double> out;
  for (double s = lo; s <= hi + 1e-9; s += step) out.push_back(s);
  return out;
}

AlgorithmSpec algo(std::string_view text) { return parse_algorithm(text); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// JSON numbers cannot carry inf/nan; those become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::vector<std::string> figure_names() {
  return {"fig1_hadamard", "fig1_gaussian", "fig2_hadamard", "fig2_gaussian", "fig3_q_sweep"};
}

ExperimentConfig figure_config(std::string_view name, std::size_t trials, Seed root_seed) {
  ExperimentConfig cfg;
  cfg.experiment_id = std::string(name);
  cfg.trials = trials;
  cfg.root_seed = root_seed;
  cfg.design.n = 32;
  cfg.design.p = 64;
  cfg.signal.k0 = 3;
  cfg.snr_db = snr_grid(0.0, 60.0, 2.0);

  const bool gaussian = name == "fig1_gaussian" || name == "fig2_gaussian";
  cfg.design.kind = gaussian ? DesignKind::gaussian : DesignKind::identity_hadamard;
  cfg.regenerate_matrix_per_trial = gaussian;

  if (name == "fig1_hadamard" || name == "fig1_gaussian" || name == "fig2_hadamard" ||
      name == "fig2_gaussian") {
    cfg.signal.kind = name.substr(0, 4) == "fig1" ? SignalKind::pm_one : SignalKind::geometric;
    cfg.algorithms = {algo("fixed_k0"),     algo("rpsc"),     algo("rcsc"),
                      algo("rpsc_hsc:0.1"), algo("rcsc_hsc:0.1"), algo("rrt:0.1"),
                      algo("rrt:0.01"),     algo("rrm"),      algo("rrta:2,0.1")};
  } else if (name == "fig3_q_sweep") {
    cfg.signal.kind = SignalKind::pm_one;
    cfg.algorithms = {algo("fixed_k0"),    algo("rpsc_hsc:0.1"), algo("rcsc_hsc:0.1"),
                      algo("rrta:1,0.1"),  algo("rrta:2,0.1"),   algo("rrta:5,0.1"),
                      algo("rrta:10,0.1")};
  } else {
    std::string names;
    for (const auto& n : figure_names()) names += (names.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::ValidationError,
                "unknown figure '" + std::string(name) + "'; available: " + names);
  }
  cfg.validate();
  return cfg;
}

std::vector<std::filesystem::path> cmd_figure(std::string_view name, std::size_t trials,
                                              const std::filesystem::path& out_dir,
                                              Seed root_seed, std::size_t threads) {
  const ExperimentConfig cfg = figure_config(name, trials, root_seed);
  const SweepResult result = run_sweep(cfg, threads);

  std::ostringstream sweep;
  write_sweep_csv(sweep, result);
  std::ostringstream plot;
  plot << "snr_db,algorithm,pe\n";
  for (const auto& r : result.rows) {
    plot << format_double(r.snr_db) << ',' << r.algorithm << ',' << format_double(r.pe) << '\n';
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  const auto sweep_path = out_dir / (std::string(name) + ".csv");
  const auto plot_path = out_dir / (std::string(name) + "_plot.csv");
  write_file_atomic(sweep_path, sweep.str());
  try {
    write_file_atomic(plot_path, plot.str());
  } catch (...) {
    std::filesystem::remove(sweep_path, ec);
    throw;
  }
  return {sweep_path, plot_path};
}

SweepResult cmd_simulate(const std::filesystem::path& config_path,
                         const std::filesystem::path& out, std::size_t threads) {
  const ExperimentConfig cfg = parse_config(read_text(config_path));
  SweepResult result = run_sweep(cfg, threads);
  std::ostringstream os;
  write_sweep_csv(os, result);
  write_file_atomic(out, os.str());
  return result;
}

std::string cmd_threshold(std::size_t n, std::size_t p, std::size_t k_max, double alpha) {
  const ThresholdTable table = build_threshold_table(n, p, k_max, alpha);
  std::ostringstream os;
  os << "k,gamma\n";
  for (std::size_t k = 1; k <= table.size(); ++k) {
    os << k << ',' << format_double(table.at(k)) << '\n';
  }
  return os.str();
}

std::filesystem::path cmd_gen_matrix(const DesignSpec& spec, const std::filesystem::path& out) {
  const DesignMatrix design = build_design(spec);
  std::ostringstream os;
  write_matrix_csv(os, design.matrix);

  json side;
  side["kind"] = std::string(to_string(spec.kind));
  side["n"] = design.n();
  side["p"] = design.p();
  side["seed"] = spec.seed;
  side["normalize"] = spec.normalize;

  std::filesystem::path sidecar = out;
  sidecar.replace_extension(".json");
  if (sidecar == out) sidecar += ".json";
  write_file_atomic(out, os.str());
  try {
    write_file_atomic(sidecar, side.dump(2) + "\n");
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(out, ec);
    throw;
  }
  return sidecar;
}

std::string cmd_recover(const RecoverOptions& opts) {
  const DenseMatrix x = read_matrix_csv(opts.matrix_path);
  const Vector y = read_vector_csv(opts.y_path);
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "y has " + std::to_string(y.size()) +
                                                  " entries but the matrix has " +
                                                  std::to_string(x.rows()) + " rows");
  }

  AlgorithmSpec spec = parse_algorithm(opts.method, opts.rule);
  if (opts.alpha) spec.alpha = *opts.alpha;
  if (opts.eta) spec.eta = *opts.eta;
  if (opts.q) spec.rrta.q = *opts.q;
  if (opts.pfd) spec.rrta.pfd_finite = *opts.pfd;
  spec.validate();
  if (spec.family == AlgorithmFamily::fixed_k0 && !spec.fixed_k) {
    throw Error(ErrorCode::ValidationError, "recover needs an explicit count, e.g. fixed:3");
  }

  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  const std::size_t k_max =
      opts.k_max ? *opts.k_max : std::min({default_kmax(n), n > 0 ? n - 1 : 0, p});
  const SolutionPath path = solution_path(x, y, k_max, opts.rule);

  AlgorithmContext ctx;
  ctx.n = n;
  ctx.p = p;
  ctx.k_max = k_max;
  ctx.sigma = opts.sigma;
  const SupportEstimate est = apply_algorithm(spec, path, ctx);

  json out;
  std::vector<std::size_t> one_based;
  for (std::size_t j : est.support) one_based.push_back(j + 1);
  out["support"] = one_based;
  out["k_selected"] = est.k_selected;
  out["status"] = std::string(to_string(est.status));
  out["residual_norm"] = number(path.residual_norms.at(est.k_selected));
  json rr = json::array();
  if (path.steps() > 0) {
    for (double v : residual_ratios(path).values) rr.push_back(number(v));
  }
  out["rr_values"] = rr;
  out["method"] = spec.label();
  out["rule"] = std::string(to_string(opts.rule));
  return out.dump(2) + "\n";
}

std::string cmd_diagnose(const DiagnoseOptions& opts) {
  const DenseMatrix x = read_matrix_csv(opts.matrix_path);
  std::optional<std::vector<std::size_t>> support;
  if (opts.support) {
    support.emplace();
    for (std::size_t j : *opts.support) {
      if (j < 1 || j > x.cols()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "support index " + std::to_string(j) + " outside 1.." +
                        std::to_string(x.cols()));
      }
      support->push_back(j - 1);
    }
    std::sort(support->begin(), support->end());
  }
  const std::size_t k0 = support ? support->size() : 0;
  const std::size_t order = std::max(opts.max_ric_order, k0 > 0 ? k0 + 1 : 0);
  const RegularityReport report = regularity_report(x, support, order);

  json out;
  out["n"] = x.rows();
  out["p"] = x.cols();
  out["mu"] = number(report.mu);
  out["mic_max_k0"] = report.mic_max_k0;
  json ric = json::object();
  for (const auto& [k, d] : report.ric) ric[std::to_string(k)] = number(d);
  out["ric"] = ric;
  if (report.erc_constant) out["erc_constant"] = number(*report.erc_constant);
  if (report.min_singular_value) out["min_singular_value"] = number(*report.min_singular_value);
  std::vector<std::string> notes = report.notes;

  if (k0 > 0) {
    const auto d0 = report.ric.find(k0);
    const auto d1 = report.ric.find(k0 + 1);
    if (d0 == report.ric.end() || d1 == report.ric.end()) {
      notes.push_back("epsilon bounds skipped: RIC of order k0 or k0+1 unavailable");
    } else {
      EpsilonInputs in;
      in.delta_k0 = d0->second;
      in.delta_k0p1 = d1->second;
      in.beta_min = opts.beta_min;
      in.beta_max = opts.beta_max;
      in.n = x.rows();
      in.p = x.cols();
      in.k_max = opts.k_max ? *opts.k_max : default_kmax(x.rows());
      in.alpha = opts.alpha;
      in.sigma = opts.sigma;
      in.k0 = k0;
      try {
        const EpsilonBounds eb = epsilon_bounds(in);
        out["epsilon"] = {{"eps_omp", number(eb.eps_omp)},
                          {"eps_rrt", number(eb.eps_rrt)},
                          {"eps_rrt_tilde", number(eb.eps_rrt_tilde)},
                          {"eps_rrm", number(eb.eps_rrm)},
                          {"eps_sigma", number(eb.eps_sigma)}};
        notes.insert(notes.end(), eb.notes.begin(), eb.notes.end());
      } catch (const Error& e) {
        notes.push_back(std::string("epsilon bounds skipped: ") + e.what());
      }
    }
  }
  out["notes"] = notes;
  return out.dump(2) + "\n";
}

std::vector<std::size_t> parse_index_list(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw Error(ErrorCode::ParseError, "bad index '" + std::string(item) + "' in list");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace rrsel::cli
