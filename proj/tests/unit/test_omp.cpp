#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "oracles.hpp"
#include "rrsel/designs.hpp"
#include "rrsel/error.hpp"
#include "rrsel/omp.hpp"

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

}  // namespace

TEST(OmpPath, MatchesNaiveRecomputation) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const DenseMatrix x = oracle::random_matrix(16, 32, 1000 + seed);
    const Vector y = oracle::random_vector(16, 2000 + seed);
    const SolutionPath path = solution_path(x, y, 8, GreedyRule::omp);
    const auto ref = oracle::naive_omp(oracle::to_eigen(x), oracle::to_eigen(y), 8);
    ASSERT_FALSE(path.truncated);
    ASSERT_EQ(path.selected, ref.selected) << "seed " << seed;
    for (std::size_t k = 0; k <= 8; ++k) {
      EXPECT_NEAR(path.residual_norms[k], ref.residual_norms[k], 1e-9 * ref.residual_norms[0]);
    }
  }
}

TEST(OlsPath, MatchesExhaustiveStepSearch) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const DenseMatrix x = oracle::random_matrix(12, 24, 3000 + seed);
    const Vector y = oracle::random_vector(12, 4000 + seed);
    const SolutionPath path = solution_path(x, y, 6, GreedyRule::ols);
    const auto ref = oracle::naive_ols(oracle::to_eigen(x), oracle::to_eigen(y), 6);
    ASSERT_EQ(path.selected, ref.selected) << "seed " << seed;
    for (std::size_t k = 0; k <= 6; ++k) {
      EXPECT_NEAR(path.residual_norms[k], ref.residual_norms[k], 1e-9 * ref.residual_norms[0]);
    }
  }
}

TEST(OmpPath, ResidualStatisticsAreConsistent) {
  const DenseMatrix x = oracle::random_matrix(20, 40, 8);
  const Vector y = oracle::random_vector(20, 9);
  const SolutionPath path = solution_path(x, y, 10, GreedyRule::omp);
  ASSERT_EQ(path.steps(), 10u);
  ASSERT_EQ(path.residual_norms.size(), 11u);
  ASSERT_EQ(path.residual_corr_inf.size(), 11u);
  EXPECT_DOUBLE_EQ(path.residual_norms[0], norm2(y));
  EXPECT_DOUBLE_EQ(path.residual_corr_inf[0], norm_inf(multiply_transpose(x, y)));
  for (std::size_t k = 1; k <= 10; ++k) {
    EXPECT_LE(path.residual_norms[k], path.residual_norms[k - 1]);
  }
  // Final coefficients reproduce the final residual.
  Vector fit(20, 0.0);
  for (std::size_t c = 0; c < path.steps(); ++c) {
    for (std::size_t i = 0; i < 20; ++i) fit[i] += x(i, path.selected[c]) * path.coeffs_final[c];
  }
  for (std::size_t i = 0; i < 20; ++i) fit[i] = y[i] - fit[i];
  EXPECT_NEAR(norm2(fit), path.residual_norms.back(), 1e-12);
  // Nested supports.
  for (std::size_t k = 1; k <= 10; ++k) {
    const auto sk = path.support_at(k);
    EXPECT_EQ(sk.size(), k);
    EXPECT_TRUE(std::is_sorted(sk.begin(), sk.end()));
  }
  EXPECT_EQ(code_of([&] { path.support_at(11); }), ErrorCode::K0ExceedsPath);
}

TEST(OmpPath, RecoversNoiselessSupportUnderCoherenceCondition) {
  const DesignMatrix d = make_identity_hadamard(32);  // μ = 1/√32 allows k0 = 3
  for (Seed s = 0; s < 50; ++s) {
    const Support sup = sample_support(64, 3, s);
    const Vector beta = make_signal(64, sup, {3, SignalKind::pm_one, 0.0}, s + 100);
    const Vector y = multiply(d.matrix, beta);
    const SolutionPath path = solution_path(d, y, 16, GreedyRule::omp);
    EXPECT_EQ(path.support_at(3), sup);
    // An exact fit ends the path.
    EXPECT_EQ(path.steps(), 3u);
    EXPECT_FALSE(path.truncated);
  }
}

TEST(OmpPath, TiesGoToSmallestIndex) {
  // y correlates equally with columns 1 and 2.
  const DenseMatrix x = DenseMatrix::from_rows({{0, 1, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}});
  const Vector y{1.0, 1.0, 0.0};
  const SolutionPath path = solution_path(x, y, 2, GreedyRule::omp);
  EXPECT_EQ(path.selected, (std::vector<std::size_t>{1, 2}));
  const SolutionPath ols = solution_path(x, y, 2, GreedyRule::ols);
  EXPECT_EQ(ols.selected, (std::vector<std::size_t>{1, 2}));
}

TEST(OmpPath, RankDeficiencyTruncates) {
  // Column 1 duplicates column 0; column 2 and 3 are independent.
  const DenseMatrix x =
      DenseMatrix::from_rows({{1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
  const Vector y{3.0, 0.2, 0.1, 0.05};
  const SolutionPath omp = solution_path(x, y, 3, GreedyRule::omp);
  // After picking 0, column 1 has zero correlation; OMP moves on to 2 and 3.
  EXPECT_EQ(omp.selected, (std::vector<std::size_t>{0, 2, 3}));

  // All columns parallel: after one step nothing independent remains.
  const DenseMatrix par = DenseMatrix::from_rows({{1, 2, -1}, {1, 2, -1}, {0, 0, 0}});
  const Vector y2{1.0, 0.5, 0.3};
  const SolutionPath p2 = solution_path(par, y2, 2, GreedyRule::omp);
  EXPECT_TRUE(p2.truncated);
  EXPECT_EQ(p2.steps(), 1u);
  const SolutionPath p3 = solution_path(par, y2, 2, GreedyRule::ols);
  EXPECT_TRUE(p3.truncated);
  EXPECT_EQ(p3.steps(), 1u);
}

TEST(OmpPath, ZeroObservationGivesEmptyPath) {
  const DenseMatrix x = oracle::random_matrix(6, 8, 1);
  const SolutionPath path = solution_path(x, Vector(6, 0.0), 3, GreedyRule::omp);
  EXPECT_EQ(path.steps(), 0u);
  EXPECT_EQ(path.residual_norms, (Vector{0.0}));
}

TEST(OmpPath, InputValidation) {
  const DenseMatrix x = oracle::random_matrix(6, 8, 1);
  EXPECT_EQ(code_of([&] { solution_path(x, Vector(5, 1.0), 2, GreedyRule::omp); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { solution_path(x, Vector(6, 1.0), 0, GreedyRule::omp); }),
            ErrorCode::DomainError);
  EXPECT_EQ(code_of([&] { solution_path(x, Vector(6, 1.0), 6, GreedyRule::omp); }),
            ErrorCode::DomainError);
  Vector bad(6, 1.0);
  bad[2] = std::nan("");
  EXPECT_EQ(code_of([&] { solution_path(x, bad, 2, GreedyRule::omp); }), ErrorCode::NonFinite);
  EXPECT_EQ(default_kmax(32), 16u);
  EXPECT_EQ(default_kmax(33), 17u);
}

TEST(StoppingRules, ThresholdValues) {
  // References from 40-digit arithmetic.
  EXPECT_NEAR(rpsc_threshold(1.0, 32), 7.2843771718571296622, 1e-13);
  EXPECT_NEAR(rcsc_threshold(1.0, 64), 2.8840537732017660341, 1e-14);
  EXPECT_NEAR(rpsc_threshold(0.01, 32, 0.1), 0.01 * 1.5848931924611134852 * 7.2843771718571296622,
              1e-14);
  EXPECT_NEAR(rcsc_threshold(2.0, 64), 2.0 * 2.8840537732017660341, 1e-13);
  EXPECT_EQ(code_of([] { rpsc_threshold(0.0, 32); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([] { rcsc_threshold(-1.0, 32); }), ErrorCode::DomainError);
}

TEST(StoppingRules, FirstCrossingOrExhausted) {
  SolutionPath path;
  path.selected = {4, 1, 7};
  path.residual_norms = {10.0, 5.0, 1.0, 0.5};
  path.residual_corr_inf = {9.0, 4.0, 3.0, 0.1};
  path.k_max = 3;

  // τ = σ·7.284 for n = 32.
  const auto r = stop_rpsc(path, 0.15, 32);
  EXPECT_EQ(r.k_selected, 2u);
  EXPECT_EQ(r.support, (std::vector<std::size_t>{1, 4}));
  EXPECT_EQ(r.status, EstimateStatus::ok);

  const auto none = stop_rpsc(path, 0.01, 32);
  EXPECT_EQ(none.status, EstimateStatus::exhausted);
  EXPECT_EQ(none.k_selected, 3u);
  EXPECT_EQ(none.support, (std::vector<std::size_t>{1, 4, 7}));

  // k = 0 qualifies when y is already below the threshold.
  const auto zero = stop_rpsc(path, 2.0, 32);
  EXPECT_EQ(zero.k_selected, 0u);
  EXPECT_TRUE(zero.support.empty());

  const auto c = stop_rcsc(path, 1.0, 64);  // τ = 2.884
  EXPECT_EQ(c.k_selected, 3u);
  EXPECT_EQ(c.status, EstimateStatus::ok);

  const auto f = stop_fixed(path, 2);
  EXPECT_EQ(f.support, (std::vector<std::size_t>{1, 4}));
  EXPECT_EQ(code_of([&] { stop_fixed(path, 4); }), ErrorCode::K0ExceedsPath);
}

TEST(GreedyRuleNames, ParseAndPrint) {
  EXPECT_EQ(parse_greedy_rule("omp"), GreedyRule::omp);
  EXPECT_EQ(parse_greedy_rule("ols"), GreedyRule::ols);
  EXPECT_EQ(to_string(GreedyRule::ols), "ols");
  EXPECT_EQ(code_of([] { parse_greedy_rule("lasso"); }), ErrorCode::ValidationError);
  EXPECT_EQ(to_string(EstimateStatus::empty_selection), "empty_selection");
}
