#include <gtest/gtest.h>

#include <cmath>

#include "fnsc/nonlinear.hpp"
#include "fnsc/picard.hpp"
#include "oracles.hpp"

namespace fnsc {
namespace {

SpectralScalar first_component(const SpectralField& f) {
  const auto c = f.component(0);
  return SpectralScalar(f.grid(), std::vector<Complex>(c.begin(), c.end()));
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

TEST(Bilinear, MatchesBruteForceConvolution) {
  const FrequencyGrid g(8);
  const BandSpec band{1, 2, false, 0.0};
  for (const PhysicalParams& p : {PhysicalParams{1.0, 0.75, 0.0}, PhysicalParams{0.9, 0.7, 3.0}}) {
    const auto u = random_band_field(g, 31, band);
    const auto v = random_band_field(g, 32, band);
    const auto slow = oracle::bilinear_step(u, v, 0.05, p);
    EXPECT_LE(max_diff(bilinear_step(u, v, 0.05, p), slow) / slow.max_magnitude(), 1e-10);
  }
}

TEST(Bilinear, TransportIsSolenoidalAndBandLimited) {
  const FrequencyGrid g(16);
  const auto u = random_band_field(g, 1, BandSpec{1, 5, false, 0.0});
  const auto t = projected_transport(u, u);
  EXPECT_LT(divergence_defect(t), 1e-14);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.in_dealias_band(i)) ASSERT_EQ(t.magnitude(i), 0.0);
}

TEST(Bilinear, IsLinearInEachArgument) {
  const FrequencyGrid g(16);
  const BandSpec band{1, 4, false, 0.0};
  const auto u = random_band_field(g, 1, band);
  const auto w = random_band_field(g, 2, band);
  const auto v = random_band_field(g, 3, band);
  const PhysicalParams p{1.0, 0.75, 5.0};
  const auto lhs = bilinear_step(u + 2.0 * w, v, 0.1, p);
  const auto rhs = bilinear_step(u, v, 0.1, p) + 2.0 * bilinear_step(w, v, 0.1, p);
  EXPECT_LT(max_diff(lhs, rhs), 1e-13 * rhs.max_magnitude());
}

TEST(Paraproduct, BonyIdentityHolds) {
  const FrequencyGrid g(32);
  const LPFrame frame(g);
  for (std::uint64_t k = 0; k < 4; ++k) {
    const auto f = first_component(random_band_field(g, 10 + k, BandSpec{1, 10, false, 0.0}));
    const auto h = first_component(random_band_field(g, 20 + k, BandSpec{1, 10, false, 0.0}));
    EXPECT_LE(verify_paraproduct_identity(f, h, frame), 1e-12);
  }
}

TEST(Forcing, SampleAndHoldLookup) {
  const FrequencyGrid g(8);
  auto a = random_band_field(g, 1, BandSpec{1, 2, false, 0.0});
  auto b = 2.0 * a;
  const FieldSeries s{{0.0, a}, {1.0, b}};
  EXPECT_EQ(&force_at(s, 0.5), &s[0].field);
  EXPECT_EQ(&force_at(s, 1.0), &s[1].field);
  EXPECT_EQ(&force_at(s, 7.0), &s[1].field);
  EXPECT_THROW(force_at(FieldSeries{{0.5, a}}, 0.0), std::invalid_argument);
}

TEST(Forcing, ConstantForceGivesTheExactDuhamelWeight) {
  const FrequencyGrid g(16);
  const auto f = random_band_field(g, 4, BandSpec{1, 4, false, 0.0});
  const PhysicalParams p{0.8, 0.75, 7.0};
  const FieldSeries s{{0.0, f}};
  const auto accumulated = forcing_term(s, 1.0, 0.1, p);
  const auto exact = apply_duhamel(f, 1.0, p);
  EXPECT_LT(max_diff(accumulated, exact), 1e-13 * exact.max_magnitude());
}

TEST(ProductConstant, DeterministicAndPositive) {
  const FrequencyGrid g(16);
  const PhysicalParams p{1.0, 0.75, 0.0};
  const auto idx = FBParams::critical_velocity(0.75, 2.0, 2.0);
  ProductCorpus small;
  small.random_pairs = 4;
  small.planar_pairs = 2;
  small.single_mode_pairs = 2;
  const auto a = measure_product_constant(g, 7, p, idx, small);
  const auto b = measure_product_constant(g, 7, p, idx, small);
  EXPECT_EQ(a.constant, b.constant);
  EXPECT_EQ(a.pairs, small.size());
  EXPECT_GT(a.constant, 0.0);
  EXPECT_EQ(small.plane_wave_pairs(), 13u * 12u);
}

TEST(ProductConstant, SampledNormMatchesDirectEvaluation) {
  // The gain shortcut against an explicit sweep of B(u, v)(t) over the same
  // sample times.
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  const PhysicalParams p{1.0, 0.75, 10.0};
  const auto idx = FBParams::critical_velocity(0.75, 2.0, 2.0);
  const auto u = random_band_field(g, 5, BandSpec{1, 3, false, 0.0});
  const auto v = random_band_field(g, 6, BandSpec{1, 3, false, 0.0});
  ProductSampling sampling;
  sampling.samples = 8;
  const double fast = bilinear_time_norm(u, v, p, idx, frame, sampling);
  const auto source = projected_transport(u, v);
  FieldSeries series;
  const double ratio = std::log(sampling.t_max / sampling.t_min) / static_cast<double>(sampling.samples - 1);
  for (std::size_t k = 0; k < sampling.samples; ++k) {
    const double t = sampling.t_min * std::exp(ratio * static_cast<double>(k));
    series.push_back({t, apply_duhamel(source, t, p)});
  }
  series.push_back({1e300, apply_kernel(source, p)});
  EXPECT_NEAR(fast, time_fb_norm(series, idx, frame, TimeNormMode::shell_first), 1e-12 * fast);
}

TEST(Picard, ScalarModelConvergesToTheSmallRoot) {
  auto solve = [](double y, double K) {
    return picard_solve<double>(
        y, [K](double a, double b) { return K * a * b; }, [](double a) { return std::abs(a); }, K, 1e-14, 200);
  };
  for (double K : {0.5, 1.0, 3.0}) {
    for (double y : {0.01, 0.05, 0.2 / K}) {
      const auto r = solve(y, K);
      ASSERT_TRUE(r.converged);
      EXPECT_TRUE(r.gate_held);
      const double root = oracle::newton([&](double x) { return K * x * x - x + y; },
                                         [&](double x) { return 2 * K * x - 1; }, 0.0);
      EXPECT_NEAR(r.point, root, 1e-12);
      EXPECT_LE(std::abs(r.point), 2.0 * y);
    }
  }
}

TEST(Picard, ReportsGateViolationAndDivergence) {
  const auto r = picard_solve<double>(
      1.0, [](double a, double b) { return a * b; }, [](double a) { return std::abs(a); }, 1.0, 1e-14, 50);
  EXPECT_FALSE(r.gate_held);
  EXPECT_FALSE(r.converged);
  EXPECT_FALSE(r.warning.empty());
}

TEST(Picard, ContinuityBound) {
  auto root = [](double y) { return (1.0 - std::sqrt(1.0 - 4.0 * y)) / 2.0; };
  for (double eps : {0.1, 0.2, 0.24})
    for (double y : {0.2 * eps, 0.6 * eps})
      for (double y2 : {0.1 * eps, 0.9 * eps})
        EXPECT_LE(std::abs(root(y) - root(y2)), std::abs(y - y2) / (1.0 - 4.0 * eps) + 1e-15);
}

}  // namespace
}  // namespace fnsc
