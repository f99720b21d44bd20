#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "rrsel/error.hpp"
#include "rrsel/special.hpp"

using namespace rrsel;

// Reference values below were computed with 40-digit arithmetic (mpmath) and
// frozen here.
TEST(LogBeta, MatchesHighPrecisionReference) {
  EXPECT_NEAR(log_beta_fn({15.5, 0.5}), -0.78999194980057785506, 1e-14);
  EXPECT_NEAR(log_beta_fn({0.5, 15.5}), -0.78999194980057785506, 1e-14);
  EXPECT_NEAR(log_beta_fn({1.0, 1.0}), 0.0, 1e-15);
  EXPECT_NEAR(log_beta_fn({0.5, 0.5}), std::log(M_PI), 1e-14);
}

TEST(LogBeta, MatchesQuadratureAndBoost) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (double a : {0.5, 2.0, 7.5, 15.5, 31.5}) {
    for (double b : {0.5, 1.0, 3.0}) {
      // Near t = 1 the second argument carries 1 - t without cancellation.
      const double integral = integrator.integrate(
          [&](double t, double tc) {
            const double one_minus = t > 0.5 ? tc : 1.0 - t;
            return std::pow(t, a - 1.0) * std::pow(one_minus, b - 1.0);
          },
          0.0, 1.0);
      EXPECT_NEAR(log_beta_fn({a, b}), std::log(integral), 1e-10) << a << "," << b;
      EXPECT_NEAR(log_beta_fn({a, b}), std::log(boost::math::beta(a, b)), 1e-12);
    }
  }
  // Large arguments, where the naive lgamma difference cancels.
  for (double a : {50.0, 500.0, 5e4}) {
    for (double b : {0.5, 12.0, 400.0}) {
      EXPECT_NEAR(log_beta_fn({a, b}), std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b),
                  1e-9 * std::max(1.0, std::abs(log_beta_fn({a, b}))));
    }
  }
}

TEST(BetaCdf, MatchesReferenceAndBoost) {
  EXPECT_NEAR(beta_cdf({15.5, 0.5}, 0.9), 0.072993418122915776577, 1e-15);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.3, 40.0), ux(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double a = ua(rng), b = ua(rng), x = ux(rng);
    const double ref = boost::math::ibeta(a, b, x);
    EXPECT_NEAR(beta_cdf({a, b}, x), ref, 1e-13 + 1e-12 * ref) << a << " " << b << " " << x;
  }
  EXPECT_EQ(beta_cdf({2, 3}, 0.0), 0.0);
  EXPECT_EQ(beta_cdf({2, 3}, 1.0), 1.0);
}

TEST(BetaCdf, LogFormReachesFarTail) {
  // ln I_x(a, 1/2) ~ a ln x + ln(2/(a B)) as x -> 0.
  const double a = 7.5;
  const double x = 1e-200;
  const double expected = a * std::log(x) - std::log(a) - log_beta_fn({a, 0.5});
  EXPECT_NEAR(log_beta_cdf({a, 0.5}, x), expected, 1e-10 * std::abs(expected));
  EXPECT_EQ(log_beta_cdf({a, 0.5}, 0.0), -std::numeric_limits<double>::infinity());
}

TEST(BetaCdf, SymmetryIdentity) {
  for (double x : {0.05, 0.3, 0.7, 0.95}) {
    EXPECT_NEAR(beta_cdf({3.5, 0.5}, x) + beta_cdf({0.5, 3.5}, 1.0 - x), 1.0, 1e-14);
  }
}

TEST(BetaCdfInv, MatchesReference) {
  EXPECT_NEAR(beta_cdf_inv({15.5, 0.5}, 9.765625e-5), 0.60814005453089009849, 1e-14);
  EXPECT_NEAR(rrt_threshold(32, 64, 16, 0.1, 1), 0.77983335048642931099, 1e-14);
}

TEST(BetaCdfInv, MatchesBoostInverse) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ua(0.5, 30.0), uz(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 300; ++i) {
    const double a = ua(rng), b = ua(rng), z = uz(rng);
    const double ref = boost::math::ibeta_inv(a, b, z);
    EXPECT_NEAR(beta_cdf_inv({a, b}, z), ref, 1e-11 * std::max(ref, 1e-3));
  }
}

TEST(BetaCdfInv, RoundTripIncludingExtremeLevels) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ua(0.5, 40.0), ulog(-300.0, -0.302);
  for (int i = 0; i < 400; ++i) {
    const double a = ua(rng);
    const double b = i % 2 ? 0.5 : ua(rng);
    const double z = std::pow(10.0, ulog(rng));
    const double lx = log_beta_cdf_inv({a, b}, z);
    if (lx < std::log(std::numeric_limits<double>::min())) {
      // The quantile itself underflows; the leading-order test covers this range.
      EXPECT_TRUE(std::isfinite(lx));
      continue;
    }
    const double back = log_beta_cdf({a, b}, std::exp(lx));
    EXPECT_NEAR(back, std::log(z), 1e-9) << a << " " << b << " " << z;
  }
  // Upper half through the symmetry branch.
  for (double z : {0.6, 0.9, 0.999, 1.0 - 1e-6}) {
    const double x = beta_cdf_inv({12.0, 0.5}, z);
    EXPECT_NEAR(beta_cdf({12.0, 0.5}, x), z, 1e-9);
  }
  EXPECT_EQ(beta_cdf_inv({2, 2}, 0.0), 0.0);
  EXPECT_EQ(beta_cdf_inv({2, 2}, 1.0), 1.0);
}

TEST(BetaCdfInv, LeadingOrderAtSmallLevels) {
  // x ≈ (a z B(a,b))^{1/a} to within 1% once z is tiny.
  for (double a : {0.5, 2.0, 7.5, 15.5}) {
    for (double b : {0.5, 1.0}) {
      for (double z : {1e-30, 1e-100, 1e-290}) {
        const double lead = (std::log(a) + std::log(z) + log_beta_fn({a, b})) / a;
        const double got = log_beta_cdf_inv({a, b}, z);
        EXPECT_NEAR(std::exp(got - lead), 1.0, 0.01) << a << " " << b << " " << z;
      }
    }
  }
}

TEST(BetaCdfInv, RejectsBadInput) {
  EXPECT_THROW(beta_cdf_inv({0.0, 1.0}, 0.5), Error);
  EXPECT_THROW(beta_cdf_inv({1.0, -1.0}, 0.5), Error);
  EXPECT_THROW(beta_cdf_inv({1.0, 1.0}, 1.5), Error);
  EXPECT_THROW(beta_cdf({1.0, 1.0}, -0.1), Error);
}

TEST(RrtThreshold, ValuesAndShape) {
  const auto table = build_threshold_table(32, 64, 16, 0.1);
  ASSERT_EQ(table.size(), 16u);
  for (std::size_t k = 1; k <= table.size(); ++k) {
    EXPECT_GT(table.at(k), 0.0);
    EXPECT_LT(table.at(k), 1.0);
    EXPECT_EQ(table.at(k), rrt_threshold(32, 64, 16, 0.1, k));
  }
  // Larger alpha means a looser (larger) threshold.
  EXPECT_GT(rrt_threshold(32, 64, 16, 0.5, 3), rrt_threshold(32, 64, 16, 0.01, 3));
  // Adaptive levels far below double precision still give positive thresholds.
  const double tiny = rrt_threshold(32, 64, 16, 1e-300, 3);
  EXPECT_GT(tiny, 0.0);
  EXPECT_TRUE(std::isfinite(tiny));

  const auto part = build_threshold_table(32, 64, 16, 0.1, 5);
  EXPECT_EQ(part.size(), 5u);
  EXPECT_EQ(part.k_max, 16u);
  EXPECT_EQ(part.values, table.truncated(5).values);
}

TEST(RrtThreshold, DomainErrors) {
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code([] { rrt_threshold(8, 16, 4, 0.1, 8); }), ErrorCode::DomainError);
  EXPECT_EQ(code([] { rrt_threshold(8, 16, 4, 0.1, 0); }), ErrorCode::DomainError);
  EXPECT_EQ(code([] { rrt_threshold(8, 16, 4, 0.1, 5); }), ErrorCode::DomainError);
  EXPECT_EQ(code([] { rrt_threshold(8, 16, 4, 0.0, 1); }), ErrorCode::DomainError);
  EXPECT_EQ(code([] { rrt_threshold(8, 16, 4, 1.0, 1); }), ErrorCode::DomainError);
}
