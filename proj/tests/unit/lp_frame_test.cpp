#include <gtest/gtest.h>

#include <cmath>

#include "fnsc/data_gen.hpp"
#include "fnsc/lp_frame.hpp"
#include "oracles.hpp"

namespace fnsc {
namespace {

TEST(LittlewoodPaley, ProfileSupportAndPlateau) {
  EXPECT_EQ(lp_chi(0.75), 1.0);
  EXPECT_EQ(lp_chi(4.0 / 3.0), 0.0);
  EXPECT_EQ(lp_phi(0.74), 0.0);
  EXPECT_EQ(lp_phi(2.7), 0.0);
  for (double r = 4.0 / 3.0; r <= 1.5; r += 0.01) EXPECT_EQ(lp_phi(r), 1.0) << r;
  for (double r = 0.76; r < 2.66; r += 0.013) {
    EXPECT_GE(lp_phi(r), 0.0);
    EXPECT_LE(lp_phi(r), 1.0);
  }
}

TEST(LittlewoodPaley, ProfileIsSmooth) {
  // Central differences of χ stay bounded and agree across step sizes.
  for (double r : {0.8, 1.0, 1.2, 1.3}) {
    const double d1 = oracle::derivative(lp_chi, r, 1e-3);
    const double d2 = oracle::derivative(lp_chi, r, 5e-4);
    EXPECT_NEAR(d1, d2, 1e-6) << r;
    EXPECT_LE(d1, 0.0);
  }
}

TEST(LittlewoodPaley, PartitionOfUnityAndOverlap) {
  for (std::size_t n : {8u, 16u, 32u}) {
    const FrequencyGrid g(n);
    const LPFrame frame(g);
    EXPECT_LE(partition_defect(frame), 1e-12);
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (!frame.covered(i)) continue;
      double sum = 0.0;
      for (int j = frame.j_min() - 2; j <= frame.j_max() + 2; ++j) sum += lp_phi(g.wavenumber(i) * std::exp2(-j));
      ASSERT_NEAR(sum, 1.0, 1e-12);
      for (int j = frame.j_min(); j <= frame.j_max(); ++j)
        for (int k = j + 2; k <= frame.j_max(); ++k) ASSERT_EQ(frame.phi_at(j, i) * frame.phi_at(k, i), 0.0);
    }
  }
}

TEST(LittlewoodPaley, InjectedFaultBreaksPartition) {
  const LPFrame frame{FrequencyGrid(16)};
  EXPECT_GT(partition_defect(frame.with_scaled_shell(frame.j_min() + 2, 1.01)), 1e-3);
}

TEST(FourierBesov, NormMatchesDirectSum) {
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  const auto f = random_band_field(g, 21, BandSpec{1, 6, false, 0.5});
  for (const auto& [s, p, q] : {std::tuple{1.0, 2.0, 2.0}, std::tuple{-0.5, 3.0, 1.0}, std::tuple{0.3, 1.5, kInfinity},
                                std::tuple{0.0, kInfinity, 2.0}}) {
    FBParams idx;
    idx.s = s;
    idx.p = p;
    idx.q = q;
    const double direct = oracle::fb_norm(f, s, p, q, frame.j_min(), frame.j_max());
    EXPECT_NEAR(fb_norm(f, idx, frame), direct, 1e-12 * direct) << s << " " << p << " " << q;
  }
}

TEST(FourierBesov, CriticalIndices) {
  const auto v = FBParams::critical_velocity(0.75, 2.0, 2.0);
  const auto f = FBParams::critical_force(0.75, 2.0, 2.0);
  EXPECT_DOUBLE_EQ(v.s, 1.0);
  EXPECT_DOUBLE_EQ(f.s, -0.5);
  EXPECT_DOUBLE_EQ(FBParams::critical_velocity(0.6, kInfinity, 2.0).s, 2.8);
  FBParams bad = v;
  bad.s = 0.9;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  FBParams low;
  low.p = 1.0;
  EXPECT_THROW(low.validate(), std::invalid_argument);
}

TEST(FourierBesov, TimeNormOrdering) {
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  const auto idx = FBParams::critical_velocity(0.75, 2.0, 2.0);
  FieldSeries series;
  for (int k = 0; k < 4; ++k)
    series.push_back({0.5 * k, random_band_field(g, 40 + static_cast<std::uint64_t>(k), BandSpec{1, 5, false, 0.0})});
  const double shell_first = time_fb_norm(series, idx, frame, TimeNormMode::shell_first);
  const double time_first = time_fb_norm(series, idx, frame, TimeNormMode::time_first);
  EXPECT_GE(shell_first, time_first);
  EXPECT_THROW(time_fb_norm(FieldSeries{}, idx, frame, TimeNormMode::shell_first), std::invalid_argument);
}

TEST(FourierBesov, DyadicScalingLaw) {
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  const auto f = random_band_field(g, 9, BandSpec{1, 5, false, 0.0});
  for (const auto& [s, p] : {std::pair{1.0, 2.0}, std::pair{0.2, 3.0}, std::pair{-0.5, kInfinity}}) {
    FBParams idx;
    idx.s = s;
    idx.p = p;
    idx.q = 2.0;
    for (int k : {-2, -1, 1, 3}) {
      const auto r = check_scaling(f, k, idx, frame);
      EXPECT_NEAR(r.lhs / r.rhs, 1.0, 1e-10) << s << " " << p << " " << k;
      // The same law from the nested grid built here.
      const FrequencyGrid nested(16, g.period() * std::exp2(-k));
      std::vector<Complex> c(f.coeffs().begin(), f.coeffs().end());
      for (auto& z : c) z *= std::exp2(-3.0 * k);
      const SpectralField scaled(nested, c);
      const double expect = std::exp2(k * (s - 3.0 + 3.0 / p)) * fb_norm(f, idx, frame);
      EXPECT_NEAR(fb_norm(scaled, idx, LPFrame(nested)), expect, 1e-10 * expect);
    }
  }
}

TEST(FourierBesov, BernsteinRejectsFieldsOutsideTheBall) {
  const FrequencyGrid g(16);
  const auto f = random_band_field(g, 3, BandSpec{1, 6, false, 0.0});
  EXPECT_THROW(check_bernstein(f, 0, {0, 0, 0}, 2.0, 2.0, 1.0, 1.0), std::invalid_argument);
  const auto r = check_bernstein(f, 4, {1, 0, 0}, 2.0, 2.0, 1.0, 1.0);
  EXPECT_LE(r.lhs, r.rhs);
}

}  // namespace
}  // namespace fnsc
