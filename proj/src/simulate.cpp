#include "rrsel/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "rrsel/csv.hpp"
#include "rrsel/error.hpp"

namespace rrsel {
namespace {

std::string short_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Stream : std::uint64_t { support = 1, signal = 2, noise = 3, matrix = 4 };

Seed stream_seed(Seed trial_seed, Stream s) {
  return splitmix64(trial_seed ^ (static_cast<std::uint64_t>(s) * 0xd1b54a32d192ed03ULL));
}

std::string normalize_name(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

double parse_param(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::ValidationError,
                "bad " + std::string(what) + " parameter '" + std::string(text) + "'");
  }
  return v;
}

std::string roster_listing() {
  std::string out;
  for (auto f : supported_roster()) {
    if (!out.empty()) out += ", ";
    out += to_string(f);
  }
  return out;
}

}  // namespace

std::string_view to_string(AlgorithmFamily family) {
  switch (family) {
    case AlgorithmFamily::fixed_k0: return "fixed_k0";
    case AlgorithmFamily::rpsc: return "rpsc";
    case AlgorithmFamily::rcsc: return "rcsc";
    case AlgorithmFamily::rpsc_hsc: return "rpsc_hsc";
    case AlgorithmFamily::rcsc_hsc: return "rcsc_hsc";
    case AlgorithmFamily::rrt: return "rrt";
    case AlgorithmFamily::rrm: return "rrm";
    case AlgorithmFamily::rrta: return "rrta";
  }
  return "rrm";
}

std::vector<AlgorithmFamily> supported_roster() {
  return {AlgorithmFamily::fixed_k0, AlgorithmFamily::rpsc,     AlgorithmFamily::rcsc,
          AlgorithmFamily::rpsc_hsc, AlgorithmFamily::rcsc_hsc, AlgorithmFamily::rrt,
          AlgorithmFamily::rrm,      AlgorithmFamily::rrta};
}

std::string AlgorithmSpec::label() const {
  switch (family) {
    case AlgorithmFamily::fixed_k0:
      return fixed_k ? "fixed(k=" + std::to_string(*fixed_k) + ")" : "fixed_k0";
    case AlgorithmFamily::rpsc: return "rpsc";
    case AlgorithmFamily::rcsc: return "rcsc";
    case AlgorithmFamily::rpsc_hsc: return "rpsc_hsc(eta=" + short_number(eta) + ")";
    case AlgorithmFamily::rcsc_hsc: return "rcsc_hsc(eta=" + short_number(eta) + ")";
    case AlgorithmFamily::rrt: return "rrt(alpha=" + short_number(alpha) + ")";
    case AlgorithmFamily::rrm: return "rrm";
    case AlgorithmFamily::rrta:
      return "rrta(q=" + short_number(rrta.q) + ";pfd=" + short_number(rrta.pfd_finite) + ")";
  }
  return "unknown";
}

void AlgorithmSpec::validate() const {
  switch (family) {
    case AlgorithmFamily::rpsc_hsc:
    case AlgorithmFamily::rcsc_hsc:
      if (!(eta > 0.0 && eta < 1.0)) {
        throw Error(ErrorCode::ValidationError, "eta must lie in (0,1) for " + label());
      }
      break;
    case AlgorithmFamily::rrt:
      if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::ValidationError, "alpha must lie in (0,1) for " + label());
      }
      break;
    case AlgorithmFamily::rrta:
      try {
        rrta.validate();
      } catch (const Error& e) {
        throw Error(ErrorCode::ValidationError, std::string(e.what()) + " for " + label());
      }
      break;
    default: break;
  }
}

AlgorithmSpec parse_algorithm(std::string_view text, GreedyRule rule) {
  const auto colon = text.find(':');
  const std::string name = normalize_name(text.substr(0, colon));
  const std::string_view params =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  AlgorithmSpec spec;
  spec.rule = rule;
  auto no_params = [&] {
    if (!params.empty()) {
      throw Error(ErrorCode::ValidationError, "'" + name + "' takes no parameters");
    }
  };

  if (name == "fixed_k0" || name == "omp_k0") {
    spec.family = AlgorithmFamily::fixed_k0;
    no_params();
  } else if (name == "fixed") {
    spec.family = AlgorithmFamily::fixed_k0;
    if (!params.empty()) {
      const double k = parse_param(params, "fixed");
      if (k < 0 || k != static_cast<double>(static_cast<std::size_t>(k))) {
        throw Error(ErrorCode::ValidationError, "fixed:k needs a nonnegative integer");
      }
      spec.fixed_k = static_cast<std::size_t>(k);
    }
  } else if (name == "rpsc") {
    spec.family = AlgorithmFamily::rpsc;
    no_params();
  } else if (name == "rcsc") {
    spec.family = AlgorithmFamily::rcsc;
    no_params();
  } else if (name == "rpsc_hsc" || name == "rcsc_hsc") {
    spec.family = name == "rpsc_hsc" ? AlgorithmFamily::rpsc_hsc : AlgorithmFamily::rcsc_hsc;
    if (!params.empty()) spec.eta = parse_param(params, "eta");
  } else if (name == "rrt") {
    spec.family = AlgorithmFamily::rrt;
    if (!params.empty()) spec.alpha = parse_param(params, "alpha");
  } else if (name == "rrm") {
    spec.family = AlgorithmFamily::rrm;
    no_params();
  } else if (name == "rrta") {
    spec.family = AlgorithmFamily::rrta;
    if (!params.empty()) {
      const auto comma = params.find(',');
      spec.rrta.q = parse_param(params.substr(0, comma), "q");
      if (comma != std::string_view::npos) {
        spec.rrta.pfd_finite = parse_param(params.substr(comma + 1), "pfd");
      }
    }
  } else {
    throw Error(ErrorCode::ValidationError,
                "unknown algorithm '" + std::string(text) + "'; supported: " + roster_listing());
  }
  spec.validate();
  return spec;
}

SupportEstimate apply_algorithm(const AlgorithmSpec& algo, const SolutionPath& path,
                                const AlgorithmContext& ctx) {
  auto need_sigma = [&]() -> double {
    if (!ctx.sigma) {
      throw Error(ErrorCode::ValidationError, algo.label() + " needs the noise level sigma");
    }
    return *ctx.sigma;
  };
  auto exhausted = [&] {
    return SupportEstimate{path.support_at(path.steps()), path.steps(),
                           EstimateStatus::exhausted};
  };

  switch (algo.family) {
    case AlgorithmFamily::fixed_k0: {
      const auto k = algo.fixed_k ? algo.fixed_k : ctx.k0;
      if (!k) throw Error(ErrorCode::ValidationError, "fixed_k0 needs the sparsity k0");
      if (*k > path.steps()) return exhausted();
      return stop_fixed(path, *k);
    }
    case AlgorithmFamily::rpsc: return stop_rpsc(path, need_sigma(), ctx.n);
    case AlgorithmFamily::rcsc: return stop_rcsc(path, need_sigma(), ctx.p);
    case AlgorithmFamily::rpsc_hsc: return stop_rpsc(path, need_sigma(), ctx.n, algo.eta);
    case AlgorithmFamily::rcsc_hsc: return stop_rcsc(path, need_sigma(), ctx.p, algo.eta);
    default: break;
  }

  // Residual-ratio selectors see only the path and the problem shape.
  if (path.steps() == 0) return exhausted();
  const ResidualRatios ratios = residual_ratios(path);
  switch (algo.family) {
    case AlgorithmFamily::rrt: {
      const bool cached = ctx.rrt_table != nullptr && ctx.rrt_table->alpha == algo.alpha &&
                          ctx.rrt_table->k_max == ctx.k_max &&
                          ctx.rrt_table->size() >= ratios.size();
      const ThresholdTable table =
          cached ? ctx.rrt_table->truncated(ratios.size())
                 : build_threshold_table(ctx.n, ctx.p, ctx.k_max, algo.alpha, ratios.size());
      return estimate_from(path, rrt_select(ratios, table));
    }
    case AlgorithmFamily::rrm:
      return estimate_from(path, {rrm_select(ratios), EstimateStatus::ok});
    case AlgorithmFamily::rrta:
      return estimate_from(path, rrta_select(ratios, ctx.n, ctx.p, ctx.k_max, algo.rrta));
    default: break;
  }
  throw Error(ErrorCode::ValidationError, "unhandled algorithm " + algo.label());
}

std::size_t ExperimentConfig::k_max() const {
  return k_max_override ? *k_max_override : default_kmax(design.n);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error(ErrorCode::ValidationError, field + ": " + why);
  };
  if (experiment_id.empty() || experiment_id.find_first_of(",\"\n") != std::string::npos) {
    fail("experiment_id", "must be nonempty and free of commas, quotes and newlines");
  }
  if (design.n < 2) fail("design.n", "must be >= 2");
  if (design.p < 1) fail("design.p", "must be >= 1");
  if (design.kind == DesignKind::identity_hadamard) {
    if ((design.n & (design.n - 1)) != 0) fail("design.n", "must be a power of two");
    if (design.p != 2 * design.n) fail("design.p", "must equal 2n for identity_hadamard");
  }
  if (design.kind == DesignKind::external && design.path.empty()) {
    fail("design.path", "required for external designs");
  }
  if (design.kind == DesignKind::external && regenerate_matrix_per_trial) {
    fail("regenerate_matrix_per_trial", "not possible for external designs");
  }
  if (signal.kind == SignalKind::geometric && !(signal.ratio > 0.0 && signal.ratio < 1.0)) {
    fail("signal.ratio", "must lie in (0,1)");
  }
  if (signal.k0 > design.p) fail("signal.k0", "exceeds p");
  if (snr_db.empty()) fail("snr_db", "must be nonempty");
  for (double s : snr_db) {
    if (!std::isfinite(s)) fail("snr_db", "entries must be finite");
  }
  if (trials < 1) fail("trials", "must be >= 1");
  if (algorithms.empty()) fail("algorithms", "must be nonempty");
  for (const auto& a : algorithms) a.validate();
  const std::size_t km = k_max();
  if (km < 1 || km > std::min(design.n - 1, design.p)) {
    fail("k_max", "must lie in [1, min(n-1, p)]");
  }
  if (signal.k0 > km) fail("signal.k0", "exceeds k_max");
}

DesignMatrix build_design(const DesignSpec& spec, std::optional<Seed> seed) {
  switch (spec.kind) {
    case DesignKind::identity_hadamard: return make_identity_hadamard(spec.n);
    case DesignKind::gaussian:
      return make_gaussian(spec.n, spec.p, seed.value_or(spec.seed), spec.normalize);
    case DesignKind::external: {
      DesignMatrix d = make_external(read_matrix_csv(std::filesystem::path(spec.path)));
      if (d.n() != spec.n || d.p() != spec.p) {
        throw Error(ErrorCode::DimensionMismatch, "external matrix is " +
                                                      std::to_string(d.n()) + "x" +
                                                      std::to_string(d.p()) + ", config says " +
                                                      std::to_string(spec.n) + "x" +
                                                      std::to_string(spec.p));
      }
      return d;
    }
  }
  throw Error(ErrorCode::ValidationError, "unknown design kind");
}

Seed derive_trial_seed(Seed root_seed, std::size_t snr_index, std::size_t trial_index) {
  const std::uint64_t a = splitmix64(root_seed);
  const std::uint64_t b = splitmix64(a ^ static_cast<std::uint64_t>(snr_index));
  return splitmix64(b ^ static_cast<std::uint64_t>(trial_index));
}

TrialRunner::TrialRunner(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  if (!config_.regenerate_matrix_per_trial) {
    fixed_design_ = std::make_shared<const DesignMatrix>(build_design(config_.design));
  }
  prepare();
}

TrialRunner::TrialRunner(ExperimentConfig config, std::shared_ptr<const DesignMatrix> fixed)
    : config_(std::move(config)), fixed_design_(std::move(fixed)) {
  config_.validate();
  if (fixed_design_ && (fixed_design_->n() != config_.design.n ||
                        fixed_design_->p() != config_.design.p)) {
    throw Error(ErrorCode::DimensionMismatch, "matrix does not match the configured n and p");
  }
  prepare();
}

void TrialRunner::prepare() {
  for (const auto& a : config_.algorithms) {
    if (a.family == AlgorithmFamily::rrt && !rrt_tables_.count(a.alpha)) {
      rrt_tables_.emplace(a.alpha, build_threshold_table(config_.design.n, config_.design.p,
                                                         config_.k_max(), a.alpha));
    }
  }
}

TrialProblem TrialRunner::problem(std::size_t snr_index, std::size_t trial_index) const {
  const Seed seed = derive_trial_seed(config_.root_seed, snr_index, trial_index);
  TrialProblem out;
  out.design = fixed_design_ ? fixed_design_
                             : std::make_shared<const DesignMatrix>(build_design(
                                   config_.design, stream_seed(seed, Stream::matrix)));
  const DesignMatrix& design = *out.design;
  const std::size_t k0 = config_.signal.k0;
  if (k0 == 0) {
    // Pure-noise trial: nothing to recover, unit noise level.
    SparseProblem& pr = out.problem;
    pr.beta.assign(design.p(), 0.0);
    pr.sigma = 1.0;
    std::mt19937_64 rng(stream_seed(seed, Stream::noise));
    std::normal_distribution<double> normal(0.0, 1.0);
    pr.noise.resize(design.n());
    for (double& w : pr.noise) w = normal(rng);
    pr.observation = pr.noise;
    return out;
  }
  const Support support = sample_support(design.p(), k0, stream_seed(seed, Stream::support));
  const Vector beta =
      make_signal(design.p(), support, config_.signal, stream_seed(seed, Stream::signal));
  out.problem = synthesize(design, beta, support, snr_from_db(config_.snr_db.at(snr_index)),
                           stream_seed(seed, Stream::noise));
  return out;
}

TrialRecord TrialRunner::run(std::size_t snr_index, std::size_t trial_index) const {
  const TrialProblem tp = problem(snr_index, trial_index);
  const DesignMatrix& design = *tp.design;
  const SparseProblem& pr = tp.problem;

  TrialRecord record;
  record.trial_index = trial_index;
  record.snr_db = config_.snr_db.at(snr_index);
  record.true_support = pr.true_support;

  // One path per greedy rule, shared by every algorithm using that rule.
  std::optional<SolutionPath> paths[2];
  auto path_for = [&](GreedyRule rule) -> const SolutionPath& {
    auto& slot = paths[rule == GreedyRule::omp ? 0 : 1];
    if (!slot) slot = solution_path(design, pr.observation, config_.k_max(), rule);
    return *slot;
  };

  AlgorithmContext ctx;
  ctx.n = design.n();
  ctx.p = design.p();
  ctx.k_max = config_.k_max();
  ctx.sigma = pr.sigma;
  ctx.k0 = config_.signal.k0;

  std::vector<bool> in_truth(design.p(), false);
  for (std::size_t j : pr.true_support) in_truth[j] = true;

  record.outcomes.reserve(config_.algorithms.size());
  for (const auto& algo : config_.algorithms) {
    AlgorithmContext c = ctx;
    if (algo.family == AlgorithmFamily::rrt) {
      const auto it = rrt_tables_.find(algo.alpha);
      if (it != rrt_tables_.end()) c.rrt_table = &it->second;
    }
    AlgorithmOutcome out;
    out.estimate = apply_algorithm(algo, path_for(algo.rule), c);
    out.exact = out.estimate.support == pr.true_support;
    out.false_discovery = std::any_of(out.estimate.support.begin(), out.estimate.support.end(),
                                      [&](std::size_t j) { return !in_truth[j]; });
    out.card_error = static_cast<long>(out.estimate.support.size()) -
                     static_cast<long>(pr.true_support.size());
    record.outcomes.push_back(std::move(out));
  }
  return record;
}

TrialRecord run_trial(const ExperimentConfig& config, const DesignMatrix& matrix,
                      std::size_t snr_index, std::size_t trial_index) {
  const TrialRunner runner(config, std::make_shared<const DesignMatrix>(matrix));
  return runner.run(snr_index, trial_index);
}

const SweepRow& SweepResult::at(double snr_db, std::string_view algorithm,
                                std::string_view rule) const {
  for (const auto& r : rows) {
    if (r.snr_db == snr_db && r.algorithm == algorithm && r.rule == rule) return r;
  }
  throw Error(ErrorCode::IndexOutOfRange, "no sweep row for snr_db=" + short_number(snr_db) +
                                              " algorithm=" + std::string(algorithm) +
                                              " rule=" + std::string(rule));
}

double binomial_stderr(double p_hat, std::size_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

SweepResult run_sweep(const ExperimentConfig& config, std::size_t threads) {
  const TrialRunner runner(config);
  const std::size_t n_alg = config.algorithms.size();

  SweepResult result;
  result.experiment_id = config.experiment_id;
  result.config_digest = config_digest(config);
  result.design = std::string(to_string(config.design.kind));
  result.n = config.design.n;
  result.p = config.design.p;
  result.k0 = config.signal.k0;
  result.signal_kind = std::string(to_string(config.signal.kind));

  threads = std::max<std::size_t>(1, std::min(threads, config.trials));
  for (std::size_t si = 0; si < config.snr_db.size(); ++si) {
    // Integer counts make the reduction independent of scheduling.
    std::vector<std::size_t> errors(n_alg, 0);
    std::vector<std::size_t> discoveries(n_alg, 0);
    std::mutex merge;
    std::exception_ptr failure;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
      std::vector<std::size_t> e(n_alg, 0);
      std::vector<std::size_t> d(n_alg, 0);
      try {
        for (std::size_t t = next++; t < config.trials; t = next++) {
          const TrialRecord rec = runner.run(si, t);
          for (std::size_t a = 0; a < n_alg; ++a) {
            e[a] += rec.outcomes[a].exact ? 0 : 1;
            d[a] += rec.outcomes[a].false_discovery ? 1 : 0;
          }
        }
      } catch (...) {
        const std::lock_guard lock(merge);
        if (!failure) failure = std::current_exception();
        next = config.trials;
        return;
      }
      const std::lock_guard lock(merge);
      for (std::size_t a = 0; a < n_alg; ++a) {
        errors[a] += e[a];
        discoveries[a] += d[a];
      }
    };

    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t a = 0; a < n_alg; ++a) {
      SweepRow row;
      row.snr_db = config.snr_db[si];
      row.algorithm = config.algorithms[a].label();
      row.rule = std::string(to_string(config.algorithms[a].rule));
      row.trials = config.trials;
      row.pe = static_cast<double>(errors[a]) / static_cast<double>(config.trials);
      row.pfd = static_cast<double>(discoveries[a]) / static_cast<double>(config.trials);
      row.pe_stderr = binomial_stderr(row.pe, config.trials);
      row.pfd_stderr = binomial_stderr(row.pfd, config.trials);
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string config_digest(const ExperimentConfig& config) {
  std::ostringstream os;
  os << config.experiment_id << '|' << to_string(config.design.kind) << '|' << config.design.n
     << '|' << config.design.p << '|' << config.design.seed << '|' << config.design.normalize
     << '|' << config.design.path << '|' << config.signal.k0 << '|'
     << to_string(config.signal.kind) << '|' << format_double(config.signal.ratio) << '|';
  for (double s : config.snr_db) os << format_double(s) << ',';
  os << '|' << config.trials << '|';
  for (const auto& a : config.algorithms) os << a.label() << '@' << to_string(a.rule) << ',';
  os << '|' << config.root_seed << '|' << config.k_max() << '|'
     << config.regenerate_matrix_per_trial;

  // FNV-1a, 64-bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {
constexpr std::string_view kSweepHeader =
    "experiment_id,design,n,p,k0,signal_kind,snr_db,algorithm,rule,trials,pe,pe_stderr,pfd,"
    "pfd_stderr";
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << kSweepHeader << '\n';
  for (const auto& r : result.rows) {
    out << result.experiment_id << ',' << result.design << ',' << result.n << ',' << result.p
        << ',' << result.k0 << ',' << result.signal_kind << ',' << format_double(r.snr_db) << ','
        << r.algorithm << ',' << r.rule << ',' << r.trials << ',' << format_double(r.pe) << ','
        << format_double(r.pe_stderr) << ',' << format_double(r.pfd) << ','
        << format_double(r.pfd_stderr) << '\n';
  }
}

SweepResult read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) {
    throw Error(ErrorCode::ParseError, "sweep CSV must start with the header line");
  }
  auto to_double = [](const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
  };
  auto to_count = [&](const std::string& s, std::size_t line_no) {
    return static_cast<std::size_t>(to_double(s, line_no));
  };

  SweepResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 14) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 14 fields");
    }
    if (result.rows.empty()) {
      result.experiment_id = f[0];
      result.design = f[1];
      result.n = to_count(f[2], line_no);
      result.p = to_count(f[3], line_no);
      result.k0 = to_count(f[4], line_no);
      result.signal_kind = f[5];
    }
    SweepRow r;
    r.snr_db = to_double(f[6], line_no);
    r.algorithm = f[7];
    r.rule = f[8];
    r.trials = to_count(f[9], line_no);
    r.pe = to_double(f[10], line_no);
    r.pe_stderr = to_double(f[11], line_no);
    r.pfd = to_double(f[12], line_no);
    r.pfd_stderr = to_double(f[13], line_no);
    result.rows.push_back(std::move(r));
  }
  return result;
}

}  // namespace rrsel
