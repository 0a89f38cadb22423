#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fnsc/data_gen.hpp"
#include "fnsc/snapshot.hpp"
#include "fnsc/spectral_field.hpp"
#include "oracles.hpp"

namespace fnsc {
namespace {

std::vector<double> physical_samples(const FrequencyGrid& g, std::uint64_t seed) {
  std::vector<double> x(3 * g.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = keyed_uniform(seed, i) - 0.5;
  return x;
}

TEST(FrequencyGrid, SignedModesRoundTrip) {
  const FrequencyGrid g(8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto k = g.signed_modes(i);
    EXPECT_EQ(g.flat_index(k[0], k[1], k[2]), i);
    for (int c : k) {
      EXPECT_GE(c, -4);
      EXPECT_LT(c, 4);
    }
  }
  EXPECT_EQ(g.signed_modes(g.negated(g.flat_index(1, -2, 3))), (std::array<int, 3>{-1, 2, -3}));
}

TEST(FrequencyGrid, QuadratureWeightAndDealiasBand) {
  const FrequencyGrid g(12, 4.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(g.base_wavenumber(), 0.5);
  EXPECT_DOUBLE_EQ(g.quadrature_weight(), 0.125);
  EXPECT_TRUE(g.in_dealias_band(g.flat_index(4, -4, 0)));
  EXPECT_FALSE(g.in_dealias_band(g.flat_index(5, 0, 0)));
  EXPECT_TRUE(g.is_nyquist(g.flat_index(-6, 0, 0)));
}

TEST(SpectralField, TransformRoundTripAndParseval) {
  const FrequencyGrid g(16, 3.0);
  const auto x = physical_samples(g, 3);
  const auto f = forward_transform<3>(x, g, MeanMode::keep);
  const auto back = inverse_transform(f);
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(back[i] - x[i]));
  EXPECT_LT(err, 1e-13);

  const double dx3 = std::pow(3.0 / 16.0, 3);
  double direct = 0.0;
  for (double v : x) direct += v * v * dx3;
  EXPECT_NEAR(2.0 * energy(f), direct, 1e-12 * direct);
}

TEST(SpectralField, ContinuumScalingOfASingleMode) {
  // u = cos(x) on [0, 2π)^3 has û(±e₁) = (2π)^{3/2}/2.
  const FrequencyGrid g(8);
  std::vector<double> x(3 * g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) x[i] = std::cos(kTwoPi * static_cast<double>(i / 64) / 8.0);
  const auto f = forward_transform<3>(x, g, MeanMode::keep);
  const double expect = std::pow(kTwoPi, 1.5) / 2.0;
  EXPECT_NEAR(std::abs(f.at(0, g.flat_index(1, 0, 0))), expect, 1e-12);
  EXPECT_NEAR(std::abs(f.at(0, g.flat_index(-1, 0, 0))), expect, 1e-12);
}

TEST(SpectralField, InverseRejectsNonHermitianData) {
  const FrequencyGrid g(8);
  SpectralField f(g);
  f.at(0, g.flat_index(1, 0, 0)) = 1.0;
  EXPECT_THROW(inverse_transform(f), std::domain_error);
  symmetrize(f);
  EXPECT_EQ(hermitian_defect(f), 0.0);
  EXPECT_NO_THROW(inverse_transform(f));
}

TEST(SpectralField, LerayProjectionIsIdempotentAndSolenoidal) {
  const FrequencyGrid g(16);
  const auto f = forward_transform<3>(physical_samples(g, 5), g);
  const auto p1 = leray_project(f);
  const auto p2 = leray_project(p1);
  EXPECT_LT(divergence_defect(p1), 1e-14);
  double diff = 0.0;
  for (std::size_t i = 0; i < p1.coeffs().size(); ++i) diff = std::max(diff, std::abs(p1.coeffs()[i] - p2.coeffs()[i]));
  EXPECT_LT(diff, 1e-14 * p1.max_magnitude());
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g.is_nyquist(i)) continue;
    const Vec3 xi = g.wavevector(i);
    const CVec3 v(f.at(0, i), f.at(1, i), f.at(2, i));
    const CVec3 expect = oracle::leray(xi).cast<Complex>() * v;
    for (std::size_t c = 0; c < 3; ++c) ASSERT_LT(std::abs(expect[static_cast<Eigen::Index>(c)] - p1.at(c, i)), 1e-13);
  }
}

TEST(SpectralField, TensorProductMatchesDirectConvolution) {
  const FrequencyGrid g(8);
  const BandSpec band{1, 2, false, 0.0};
  const auto u = random_band_field(g, 11, band);
  const auto v = random_band_field(g, 12, band);
  const auto fast = pointwise_tensor_product(u, v);
  const auto slow = oracle::tensor_convolution(u, v);
  double err = 0.0;
  for (std::size_t i = 0; i < fast.coeffs().size(); ++i) err = std::max(err, std::abs(fast.coeffs()[i] - slow.coeffs()[i]));
  EXPECT_LT(err, 1e-13 * slow.max_magnitude());
}

TEST(SpectralField, TaylorGreenIsDivergenceFree) {
  const FrequencyGrid g(16);
  const auto tg = taylor_green_field(g);
  EXPECT_LE(divergence_defect(tg), 1e-14);
  EXPECT_EQ(hermitian_defect(tg), 0.0);
  EXPECT_GT(energy(tg), 0.0);
}

TEST(Snapshot, RoundTripIsBitExact) {
  const FrequencyGrid g(8, 5.0);
  auto f = random_band_field(g, 4, BandSpec{1, 2, false, 0.0});
  f.set_time_tag(1.25);
  const auto path = std::filesystem::temp_directory_path() / "fnsc_snapshot_roundtrip.fnsc";
  write_snapshot(path, f, SnapshotHeader{0.3, 0.7, 2.0});
  const auto s = read_snapshot(path);
  EXPECT_EQ(s.field.grid().n(), 8u);
  EXPECT_EQ(s.field.grid().period(), 5.0);
  EXPECT_EQ(s.header.nu, 0.3);
  EXPECT_EQ(s.header.alpha, 0.7);
  EXPECT_EQ(s.header.omega, 2.0);
  EXPECT_EQ(s.field.time_tag(), 1.25);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) ASSERT_EQ(s.field.coeffs()[i], f.coeffs()[i]);
  std::filesystem::remove(path);
}

TEST(Snapshot, RejectsBadMagicAndTruncation) {
  const auto path = std::filesystem::temp_directory_path() / "fnsc_snapshot_bad.fnsc";
  {
    std::ofstream out(path, std::ios::binary);
    out << "XXXXjunk";
  }
  EXPECT_THROW(read_snapshot(path), SnapshotError);
  const FrequencyGrid g(8);
  write_snapshot(path, SpectralField(g), SnapshotHeader{});
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 16);
  EXPECT_THROW(read_snapshot(path), SnapshotError);
  std::filesystem::remove(path);
  EXPECT_THROW(read_snapshot(path), SnapshotError);
}

}  // namespace
}  // namespace fnsc
