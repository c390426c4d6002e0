#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "layered_hill/estimator.hpp"
#include "layered_hill/samplers.hpp"
#include "test_support.hpp"

using namespace layered_hill;
namespace lh = layered_hill;

namespace {

OrderStatStream stream_of(int k, std::vector<double> values, bool exhausted = true) {
  OrderStatStream s;
  s.k = k;
  s.values = std::move(values);
  s.requested = s.values.size();
  s.exhausted = exhausted;
  s.total_enumerated = s.values.size();
  return s;
}

GeometricConstants pair_constants() { return geometric_constants(Constraint::pair_distance(1.0), 2); }

// Textbook Hill on sorted norms, written independently of the stream code.
double plain_hill(std::vector<double> norms, std::size_t m) {
  std::sort(norms.begin(), norms.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += std::log(norms[i] / norms[m - 1]);
  return sum / static_cast<double>(m);
}

}  // namespace

TEST(LayeredHill, FirstLayer) {
  EXPECT_NEAR(lh::layered_hill(stream_of(1, {8, 4, 2, 1}), 2), 0.34657359027997264, 1e-15);
}

TEST(LayeredHill, SecondLayer) {
  EXPECT_NEAR(lh::layered_hill(stream_of(2, {10, 8, 5, 4, 2}), 2), 0.45814536593707755, 1e-15);
}

TEST(LayeredHill, DegenerateCut) {
  EXPECT_EQ(lh::layered_hill(stream_of(1, {7, 3}), 1), 0.0);
  EXPECT_EQ(lh::layered_hill(stream_of(3, {7, 3}), 1), 0.0);
}

TEST(LayeredHill, TraditionalCutUsesNextOrderStatistic) {
  EXPECT_NEAR(lh::layered_hill(stream_of(1, {8, 4, 2, 1}), 2, HillCut::Traditional), 0.5 * std::log(8.0), 1e-15);
  EXPECT_EQ(required_values(3, 2, HillCut::Traditional), 10u);
}

TEST(LayeredHill, InsufficientExtremes) {
  try {
    lh::layered_hill(stream_of(2, {5, 4, 3}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientExtremes);
  }
  EXPECT_THROW(lh::layered_hill(stream_of(1, {5, 0}), 2), Error);
}

TEST(LayeredHill, MatchesPlainHillForFirstLayer) {
  SeededRng rng(3, 0);
  const RadialModel model{RadialFamily::PowerLaw, 2.5, 2};
  const auto cloud = sample_cloud(model, 2000, rng);
  std::vector<double> norms(cloud.norms().data(), cloud.norms().data() + cloud.size());
  for (std::uint64_t m : {1u, 5u, 40u, 300u}) {
    const auto stream = top_tuple_values(cloud, Constraint::always_one(), m);
    EXPECT_NEAR(lh::layered_hill(stream, m), plain_hill(norms, m), 1e-12);
  }
}

TEST(LayeredHill, InvariantUnderRotation) {
  std::mt19937_64 gen(5);
  SeededRng rng(5, 1);
  const auto cloud = sample_cloud({RadialFamily::PowerLaw, 2.5, 2}, 3000, rng);
  const PointCloudd rotated(layered_hill::testing::random_rotation(gen, 2) * cloud.points());
  const auto c = Constraint::pair_distance(1.0);
  const double a = lh::layered_hill(top_tuple_values(cloud, c, 400), 20);
  const double b = lh::layered_hill(top_tuple_values(rotated, c, 400), 20);
  EXPECT_NEAR(a, b, 1e-9);
}

TEST(AlphaHat, Examples) {
  EXPECT_DOUBLE_EQ(alpha_hat(2.0, 1, 2), 2.5);
  EXPECT_DOUBLE_EQ(alpha_hat(1.0 / 3.0, 2, 2), 2.5);
  EXPECT_DOUBLE_EQ(alpha_hat(0.5, 1, 2), 4.0);
  EXPECT_THROW(alpha_hat(0.0, 1, 2), Error);
  for (double h = 0.1; h < 5.0; h += 0.1) EXPECT_GT(alpha_hat(h, 2, 2), alpha_hat(h + 1e-3, 2, 2));
}

TEST(GeometricConstants, FirstLayer) {
  const auto gc = geometric_constants(Constraint::always_one(), 2);
  EXPECT_NEAR(gc.ck, 2.0 * M_PI, 1e-14);
  EXPECT_DOUBLE_EQ(gc.D(1), 1.0);
  EXPECT_FALSE(gc.monte_carlo);
}

TEST(GeometricConstants, PairClosedForm) {
  const auto gc = pair_constants();
  EXPECT_NEAR(gc.ck, M_PI, 1e-14);
  EXPECT_NEAR(gc.D(2), M_PI, 1e-14);
  EXPECT_NEAR(gc.D(1), M_PI * M_PI, 1e-13);
  EXPECT_FALSE(gc.monte_carlo);
}

TEST(GeometricConstants, PairMonteCarlo) {
  const auto gc = geometric_constants(Constraint::pair_distance(1.0), 2, 1'000'000);
  ASSERT_TRUE(gc.monte_carlo);
  EXPECT_NEAR(gc.ck, M_PI, 0.01 * M_PI);
  EXPECT_NEAR(gc.D(1), M_PI * M_PI, 1e-12);  // every pair of points in the unit ball qualifies
  // the sampling ball is exactly the pair support, so every draw hits
  EXPECT_EQ(gc.monte_carlo->standard_error, 0.0);
}

// d = 1, diameter t: {(z1, z2): |z1|, |z2|, |z1 - z2| <= t} is a hexagon of area 3 t^2.
TEST(GeometricConstants, TripleDiameterOnTheLine) {
  const auto gc = geometric_constants(Constraint::diameter(3, 1.0), 1, 400'000);
  EXPECT_NEAR(gc.D(3), 3.0, 0.02);
  EXPECT_NEAR(gc.ck, 1.0, 0.01);
  ASSERT_TRUE(gc.monte_carlo);
  EXPECT_GT(gc.monte_carlo->standard_error, 0.0);
  EXPECT_LT(gc.monte_carlo->standard_error, 0.005);
  EXPECT_NEAR(gc.D(3), 3.0, 4.0 * gc.monte_carlo->dkl_standard_error.at(3));
}

TEST(LimitCoefficients, Examples) {
  const auto gc = pair_constants();
  EXPECT_NEAR(limit_coeff_L(2, 1, 2, 2.5, gc), 3.4271919857343196, 1e-12);
  EXPECT_DOUBLE_EQ(limit_coeff_L(1, 1, 2, 2.5, geometric_constants(Constraint::always_one(), 2)), 1.0);
  EXPECT_NEAR(variance_constant_A(2, 1, 2, 2.5, gc), 0.19197310480238153, 1e-12);
  EXPECT_NEAR(variance_constant_A(1, 1, 2, 2.5, geometric_constants(Constraint::always_one(), 2)), 4.0, 1e-12);
  EXPECT_NEAR(variance_constant_A(2, 2, 2, 2.5, gc), 1.0 / 9.0, 1e-15);
  EXPECT_THROW(limit_coeff_L(2, 3, 2, 2.5, gc), Error);
  EXPECT_THROW(variance_constant_A(2, 2, 2, 1.0, gc), Error);
}

TEST(LimitCoefficients, DiagonalIdentitiesOnAGrid) {
  for (int d = 1; d <= 3; ++d) {
    for (int k = 1; k <= 3; ++k) {
      const Constraint c = k == 1 ? Constraint::always_one() : Constraint::diameter(k, 1.0);
      const auto gc = geometric_constants(c, d, k >= 3 ? std::optional<std::uint64_t>(20'000) : std::nullopt);
      for (double alpha = static_cast<double>(d) / k + 0.25; alpha < 10.0; alpha += 0.75) {
        const double ak = alpha * k - d;
        EXPECT_NEAR(limit_coeff_L(k, k, d, alpha, gc), 1.0, 1e-12);
        EXPECT_NEAR(variance_constant_A(k, k, d, alpha, gc) * ak * ak, 1.0, 1e-12);
      }
    }
  }
}

TEST(Regime, Heuristic) {
  EXPECT_EQ(select_regime(0.3, 2, 2, 2.5).tag, RegimeTag::Vanishing);
  EXPECT_EQ(select_regime(0.5, 1, 2, 2.5).tag, RegimeTag::Vanishing);
  EXPECT_EQ(select_regime(0.9, 2, 2, 2.5).tag, RegimeTag::Diverging);
  EXPECT_EQ(select_regime(0.41, 2, 2, 2.5).tag, RegimeTag::Constant);
  EXPECT_FALSE(select_regime(0.41, 2, 2, 2.5).xi);
}

TEST(NormalizedStatistic, Examples) {
  const auto gc1 = geometric_constants(Constraint::always_one(), 2);
  const Regime vanishing{};
  EXPECT_NEAR(normalized_statistic(2.0, 1, 2, 100, 2.5, 2.5, vanishing, gc1), 0.0, 1e-15);
  EXPECT_NEAR(normalized_statistic(2.1, 1, 2, 100, 2.5, 2.5, vanishing, gc1), 0.5, 1e-12);
  EXPECT_NEAR(normalized_statistic(1.0 / 3.0 + 0.001, 2, 2, 100, 2.5, 2.5, vanishing, pair_constants()), 0.3, 1e-12);
  EXPECT_NEAR(normalized_statistic(2.1, 1, 2, 100, 2.5, 2.5, {RegimeTag::Diverging, {}}, gc1), 0.5, 1e-12);
}

TEST(NormalizedStatistic, ConstantRegime) {
  const auto gc = pair_constants();
  const Regime constant{RegimeTag::Constant, 2.0};
  const double variance = 2.0 * variance_constant_A(2, 1, 2, 2.5, gc) + variance_constant_A(2, 2, 2, 2.5, gc);
  EXPECT_NEAR(normalized_statistic(1.0 / 3.0 + 0.001, 2, 2, 100, 2.5, 2.5, constant, gc),
              100.0 * 0.001 / std::sqrt(variance), 1e-12);
}

TEST(NormalizedStatistic, Errors) {
  const auto gc = pair_constants();
  try {
    normalized_statistic(0.3, 2, 2, 10, 2.5, 2.5, {RegimeTag::Diverging, {}}, gc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedRegime);
  }
  try {
    normalized_statistic(0.3, 2, 2, 10, 2.5, 2.5, {RegimeTag::Constant, {}}, gc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingXi);
  }
}

TEST(ConfidenceInterval, Example) {
  const auto ci = confidence_interval(2.0, 1, 2, 100, 0.95);
  EXPECT_NEAR(ci.lower, 2.4180614595882735, 1e-9);
  EXPECT_NEAR(ci.upper, 2.6218877614958003, 1e-9);
}

TEST(ConfidenceInterval, ZeroLevelCollapses) {
  const auto ci = confidence_interval(0.4, 2, 2, 30, 0.0);
  EXPECT_DOUBLE_EQ(ci.lower, alpha_hat(0.4, 2, 2));
  EXPECT_DOUBLE_EQ(ci.upper, alpha_hat(0.4, 2, 2));
}

TEST(ConfidenceInterval, BracketsEstimate) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> h(0.01, 5.0);
  std::uniform_real_distribution<double> level(0.01, 0.99);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 1 + trial % 3;
    const std::uint64_t m = 1 + rng() % 200;
    const double hv = h(rng);
    try {
      const auto ci = confidence_interval(hv, k, 2, m, level(rng));
      const double a = alpha_hat(hv, k, 2);
      EXPECT_LE(ci.lower, a);
      EXPECT_GE(ci.upper, a);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DegenerateInterval);
    }
  }
}

TEST(ConfidenceInterval, Degenerate) {
  // sqrt(A) equals H at alpha_hat, so m^{k/2} <= c_U leaves no positive denominator.
  EXPECT_THROW(confidence_interval(1.0, 1, 2, 3, 0.95), Error);
}

TEST(TheoreticalRadius, PowerLaw) {
  const double c = 1.0 / (4.0 * M_PI);
  EXPECT_NEAR(theoretical_radius_Rk(2.0 * M_PI, 1, 2, 2.5, c), 1.0, 1e-14);
  for (int k = 1; k <= 3; ++k) {
    const double t = 37.0;
    const double r = theoretical_radius_Rk(t, k, 2, 2.5, c);
    EXPECT_NEAR(std::pow(t * c, k) * std::pow(r, 2.0 - 2.5 * k), 2.5 * k - 2.0, 1e-12);
    EXPECT_GT(theoretical_radius_Rk(2 * t, k, 2, 2.5, c), r);
  }
  EXPECT_THROW(theoretical_radius_Rk(1.0, 1, 2, 2.0, c), Error);
}

TEST(InverseNormalCdf, Values) {
  EXPECT_NEAR(inverse_normal_cdf(0.5), 0.0, 1e-15);
  EXPECT_NEAR(inverse_normal_cdf(0.975), 1.959963984540054, 1e-9);
  EXPECT_NEAR(inverse_normal_cdf(0.995), 2.5758293035489004, 1e-9);
  EXPECT_NEAR(inverse_normal_cdf(1e-8), -5.612001244174789, 1e-7);
  for (double p = 0.001; p < 1.0; p += 0.0123) EXPECT_NEAR(inverse_normal_cdf(p), -inverse_normal_cdf(1.0 - p), 1e-9);
  EXPECT_THROW(inverse_normal_cdf(0.0), Error);
  EXPECT_THROW(inverse_normal_cdf(1.0), Error);
}

TEST(Estimate, ReportAndJson) {
  SeededRng rng(11, 0);
  const auto cloud = sample_cloud({RadialFamily::PowerLaw, 2.5, 2}, 5000, rng);
  EstimateOptions options;
  options.gamma = 0.95;
  const auto report = estimate(cloud, Constraint::pair_distance(1.0), 10, options);
  EXPECT_EQ(report.k, 2);
  EXPECT_EQ(report.m, 10u);
  EXPECT_GT(report.h, 0.0);
  EXPECT_DOUBLE_EQ(report.alpha_hat, alpha_hat(report.h, 2, 2));
  EXPECT_EQ(report.regime.tag, RegimeTag::Vanishing);
  ASSERT_TRUE(report.ci && report.variance_a && report.tau);
  EXPECT_DOUBLE_EQ(*report.tau, 100.0);
  EXPECT_LE(report.ci->lower, report.alpha_hat);
  EXPECT_GE(report.ci->upper, report.alpha_hat);

  const auto json = nlohmann::json::parse(to_json(report));
  for (const char* key : {"k", "d", "m", "H", "alpha_hat", "regime", "variance_A", "tau", "ci_lower", "ci_upper", "gamma"})
    EXPECT_TRUE(json.contains(key)) << key;
  EXPECT_EQ(json["regime"], "vanishing");
  EXPECT_EQ(json["H"].get<double>(), report.h);
}

TEST(Estimate, DivergingSecondLayerHasNoTau) {
  SeededRng rng(12, 0);
  const auto cloud = sample_cloud({RadialFamily::PowerLaw, 2.5, 2}, 2000, rng);
  EstimateOptions options;
  options.beta = 0.9;
  const auto report = estimate(cloud, Constraint::pair_distance(1.0), 5, options);
  EXPECT_EQ(report.regime.tag, RegimeTag::Diverging);
  EXPECT_FALSE(report.tau);
  EXPECT_TRUE(report.variance_a);
}
