#include <gtest/gtest.h>

#include <bit>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "rrsel/error.hpp"
#include "rrsel/simulate.hpp"

using namespace rrsel;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.experiment_id = "unit";
  c.design.kind = DesignKind::identity_hadamard;
  c.design.n = 16;
  c.design.p = 32;
  c.signal.k0 = 2;
  c.snr_db = {5.0, 20.0};
  c.trials = 60;
  c.root_seed = 42;
  for (const char* a : {"fixed_k0", "rpsc", "rcsc", "rpsc_hsc", "rcsc_hsc", "rrt:0.1", "rrm",
                        "rrta"}) {
    c.algorithms.push_back(parse_algorithm(a));
  }
  c.algorithms.push_back(parse_algorithm("rrm", GreedyRule::ols));
  return c;
}

}  // namespace

TEST(TrialSeed, DeterministicAndDistinct) {
  EXPECT_EQ(derive_trial_seed(7, 3, 9), derive_trial_seed(7, 3, 9));
  EXPECT_NE(derive_trial_seed(7, 0, 0), derive_trial_seed(7, 0, 1));
  EXPECT_NE(derive_trial_seed(7, 0, 1), derive_trial_seed(7, 1, 0));
  std::set<Seed> seen;
  for (std::size_t s = 0; s < 50; ++s)
    for (std::size_t t = 0; t < 200; ++t) seen.insert(derive_trial_seed(1, s, t));
  EXPECT_EQ(seen.size(), 50u * 200u);
}

TEST(TrialSeed, Avalanche) {
  std::mt19937_64 rng(3);
  double total = 0.0;
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const Seed root = rng();
    const std::size_t si = rng() % 64;
    const std::size_t ti = rng() % 100000;
    const Seed base = derive_trial_seed(root, si, ti);
    Seed flipped = 0;
    switch (i % 3) {
      case 0: flipped = derive_trial_seed(root ^ (Seed{1} << (rng() % 64)), si, ti); break;
      case 1: flipped = derive_trial_seed(root, si ^ (std::size_t{1} << (rng() % 6)), ti); break;
      default: flipped = derive_trial_seed(root, si, ti ^ (std::size_t{1} << (rng() % 16))); break;
    }
    total += std::popcount(base ^ flipped);
  }
  EXPECT_GE(total / samples, 20.0);
  EXPECT_NEAR(total / samples, 32.0, 1.0);
}

TEST(Roster, FamiliesDefaultsAndLabels) {
  EXPECT_EQ(supported_roster().size(), 8u);
  EXPECT_EQ(kDefaultEta, 0.1);
  EXPECT_EQ(kDefaultAlpha, 0.1);
  EXPECT_EQ(parse_algorithm("rrt").label(), "rrt(alpha=0.1)");
  EXPECT_EQ(parse_algorithm("rrt:0.01").label(), "rrt(alpha=0.01)");
  EXPECT_EQ(parse_algorithm("rrta").label(), "rrta(q=2;pfd=0.1)");
  EXPECT_EQ(parse_algorithm("rrta:10,0.05").label(), "rrta(q=10;pfd=0.05)");
  EXPECT_EQ(parse_algorithm("rpsc-hsc").label(), "rpsc_hsc(eta=0.1)");
  EXPECT_EQ(parse_algorithm("rcsc_hsc:0.3").label(), "rcsc_hsc(eta=0.3)");
  EXPECT_EQ(parse_algorithm("fixed:4").label(), "fixed(k=4)");
  EXPECT_EQ(parse_algorithm("fixed_k0").label(), "fixed_k0");
  EXPECT_EQ(parse_algorithm("rrm", GreedyRule::ols).rule, GreedyRule::ols);

  for (const char* bad : {"lasso", "rrt:2", "rrt:abc", "rpsc_hsc:1.5", "rrta:0", "rrm:3",
                          "fixed:-1", "fixed:1.5"}) {
    EXPECT_EQ(code_of([&] { parse_algorithm(bad); }), ErrorCode::ValidationError) << bad;
  }
  try {
    parse_algorithm("lasso");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("rrta"), std::string::npos);
  }
}

TEST(ApplyAlgorithm, SelectorsIgnoreSideInformation) {
  SolutionPath path;
  path.selected = {3, 8, 1};
  path.residual_norms = {10.0, 2.0, 1.9, 1.85};
  path.residual_corr_inf = {5.0, 1.0, 0.9, 0.8};
  path.k_max = 3;
  AlgorithmContext ctx{32, 64, 3, std::nullopt, std::nullopt, nullptr};
  EXPECT_EQ(apply_algorithm(parse_algorithm("rrm"), path, ctx).support,
            (std::vector<std::size_t>{3}));
  EXPECT_EQ(apply_algorithm(parse_algorithm("rrta"), path, ctx).k_selected, 1u);
  EXPECT_EQ(apply_algorithm(parse_algorithm("rrt"), path, ctx).k_selected, 1u);
  // Known-σ rules and the oracle count refuse to run without their inputs.
  EXPECT_EQ(code_of([&] { apply_algorithm(parse_algorithm("rpsc"), path, ctx); }),
            ErrorCode::ValidationError);
  EXPECT_EQ(code_of([&] { apply_algorithm(parse_algorithm("fixed_k0"), path, ctx); }),
            ErrorCode::ValidationError);
  ctx.k0 = 5;
  const auto ex = apply_algorithm(parse_algorithm("fixed_k0"), path, ctx);
  EXPECT_EQ(ex.status, EstimateStatus::exhausted);
  EXPECT_EQ(ex.support.size(), 3u);

  SolutionPath empty;
  empty.residual_norms = {0.0};
  empty.residual_corr_inf = {0.0};
  const auto e = apply_algorithm(parse_algorithm("rrm"), empty, ctx);
  EXPECT_TRUE(e.support.empty());
  EXPECT_EQ(e.status, EstimateStatus::exhausted);
}

TEST(Config, Validation) {
  ExperimentConfig c = small_config();
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.k_max(), 8u);
  auto broken = [&](const std::function<void(ExperimentConfig&)>& f) {
    ExperimentConfig d = small_config();
    f(d);
    return code_of([&] { d.validate(); });
  };
  EXPECT_EQ(broken([](auto& d) { d.trials = 0; }), ErrorCode::ValidationError);
  EXPECT_EQ(broken([](auto& d) { d.snr_db.clear(); }), ErrorCode::ValidationError);
  EXPECT_EQ(broken([](auto& d) { d.algorithms.clear(); }), ErrorCode::ValidationError);
  EXPECT_EQ(broken([](auto& d) { d.design.p = 20; }), ErrorCode::ValidationError);
  EXPECT_EQ(broken([](auto& d) { d.k_max_override = 16; }), ErrorCode::ValidationError);
  EXPECT_EQ(broken([](auto& d) { d.signal.k0 = 9; }), ErrorCode::ValidationError);
  EXPECT_EQ(broken([](auto& d) { d.experiment_id = "a,b"; }), ErrorCode::ValidationError);
}

TEST(RunTrial, NoiselessLimitRecoversExactly) {
  ExperimentConfig c;
  c.design.n = 32;
  c.design.p = 64;
  c.signal.k0 = 3;
  c.snr_db = {120.0};
  c.algorithms = {parse_algorithm("fixed_k0")};
  const DesignMatrix d = make_identity_hadamard(32);
  for (std::size_t t = 0; t < 50; ++t) {
    const TrialRecord rec = run_trial(c, d, 0, t);
    ASSERT_EQ(rec.outcomes.size(), 1u);
    EXPECT_TRUE(rec.outcomes[0].exact);
    EXPECT_EQ(rec.snr_db, 120.0);
  }
}

TEST(RunTrial, BookkeepingAndDeterminism) {
  const ExperimentConfig c = small_config();
  const TrialRunner runner(c);
  for (std::size_t t = 0; t < 40; ++t) {
    const TrialRecord a = runner.run(0, t);
    const TrialRecord b = runner.run(0, t);
    ASSERT_EQ(a.outcomes.size(), c.algorithms.size());
    EXPECT_EQ(a.true_support, b.true_support);
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
      const auto& o = a.outcomes[i];
      EXPECT_EQ(o.estimate.support, b.outcomes[i].estimate.support);
      EXPECT_EQ(o.exact, o.estimate.support == a.true_support);
      if (o.exact) {
        EXPECT_FALSE(o.false_discovery);
      }
      EXPECT_EQ(o.card_error == 0, o.estimate.support.size() == a.true_support.size());
    }
  }
}

TEST(RunTrial, AllPathAlgorithmsShareOneDraw) {
  // The fixed_k0 estimate must be the first k0 steps of the same path the
  // selectors used: both agree with a path recomputed from the trial's data.
  const ExperimentConfig c = small_config();
  const TrialRunner runner(c);
  const TrialProblem tp = runner.problem(1, 5);
  const SolutionPath path =
      solution_path(*tp.design, tp.problem.observation, c.k_max(), GreedyRule::omp);
  const TrialRecord rec = runner.run(1, 5);
  EXPECT_EQ(rec.outcomes[0].estimate.support, path.support_at(2));
  EXPECT_EQ(rec.outcomes[6].estimate.support,
            path.support_at(rrm_select(residual_ratios(path))));
}

TEST(RunTrial, ZeroSparsityCountsEmptyAsExact) {
  ExperimentConfig c = small_config();
  c.signal.k0 = 0;
  c.algorithms = {parse_algorithm("fixed_k0"), parse_algorithm("fixed:1")};
  const TrialRunner runner(c);
  const TrialRecord rec = runner.run(0, 0);
  EXPECT_TRUE(rec.true_support.empty());
  EXPECT_TRUE(rec.outcomes[0].exact);
  EXPECT_FALSE(rec.outcomes[1].exact);
  EXPECT_TRUE(rec.outcomes[1].false_discovery);
}

TEST(RunTrial, GaussianRedrawControl) {
  ExperimentConfig c = small_config();
  c.design.kind = DesignKind::gaussian;
  c.regenerate_matrix_per_trial = true;
  const TrialRunner redraw(c);
  EXPECT_NE(redraw.problem(0, 0).design->matrix, redraw.problem(0, 1).design->matrix);
  EXPECT_EQ(redraw.problem(0, 0).design->matrix, redraw.problem(0, 0).design->matrix);
  c.regenerate_matrix_per_trial = false;
  const TrialRunner fixed(c);
  EXPECT_EQ(fixed.problem(0, 0).design.get(), fixed.problem(1, 7).design.get());
}

TEST(Sweep, ShapeStatisticsAndThreadIndependence) {
  const ExperimentConfig c = small_config();
  const SweepResult one = run_sweep(c, 1);
  const SweepResult four = run_sweep(c, 4);
  EXPECT_EQ(one.rows, four.rows);
  EXPECT_EQ(one.config_digest, four.config_digest);
  ASSERT_EQ(one.rows.size(), c.snr_db.size() * c.algorithms.size());
  for (const auto& r : one.rows) {
    EXPECT_GE(r.pe, 0.0);
    EXPECT_LE(r.pe, 1.0);
    EXPECT_LE(r.pfd, r.pe);  // a false discovery is always an error
    EXPECT_DOUBLE_EQ(r.pe_stderr, binomial_stderr(r.pe, r.trials));
    EXPECT_EQ(r.trials, 60u);
  }
  EXPECT_EQ(one.at(20.0, "rrm", "ols").rule, "ols");
  EXPECT_EQ(code_of([&] { one.at(99.0, "rrm"); }), ErrorCode::IndexOutOfRange);
  // Repeat runs are bit-identical.
  EXPECT_EQ(run_sweep(c, 2).rows, one.rows);
}

TEST(Sweep, SingleTrialHasZeroStderr) {
  ExperimentConfig c = small_config();
  c.trials = 1;
  for (const auto& r : run_sweep(c).rows) {
    EXPECT_TRUE(r.pe == 0.0 || r.pe == 1.0);
    EXPECT_EQ(r.pe_stderr, 0.0);
  }
}

TEST(Sweep, CsvRoundTrip) {
  const SweepResult res = run_sweep(small_config());
  std::ostringstream out;
  write_sweep_csv(out, res);
  std::istringstream in(out.str());
  const SweepResult back = read_sweep_csv(in);
  EXPECT_EQ(back.rows, res.rows);
  EXPECT_EQ(back.experiment_id, res.experiment_id);
  EXPECT_EQ(back.design, res.design);
  EXPECT_EQ(back.n, res.n);
  EXPECT_EQ(back.p, res.p);
  EXPECT_EQ(back.k0, res.k0);
  EXPECT_EQ(back.signal_kind, res.signal_kind);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "experiment_id,design,n,p,k0,signal_kind,snr_db,algorithm,rule,trials,pe,pe_stderr,"
            "pfd,pfd_stderr");
  std::istringstream bad("nope\n");
  EXPECT_EQ(code_of([&] { read_sweep_csv(bad); }), ErrorCode::ParseError);
}

TEST(Sweep, DigestTracksConfig) {
  ExperimentConfig a = small_config();
  ExperimentConfig b = small_config();
  EXPECT_EQ(config_digest(a), config_digest(b));
  b.root_seed = 43;
  EXPECT_NE(config_digest(a), config_digest(b));
  EXPECT_EQ(config_digest(a).size(), 16u);
}

TEST(Snr, DecibelConversion) {
  EXPECT_DOUBLE_EQ(snr_from_db(0.0), 1.0);
  EXPECT_DOUBLE_EQ(snr_from_db(20.0), 100.0);
  EXPECT_NEAR(snr_from_db(3.0), 1.9952623149688795, 1e-15);
}
