#include <gtest/gtest.h>

#include <cmath>

#include "fnsc/data_gen.hpp"
#include "fnsc/symbols.hpp"
#include "oracles.hpp"

namespace fnsc {
namespace {

Vec3 random_xi(std::uint64_t k) {
  Vec3 xi(6.0 * keyed_uniform(77, 4 * k) - 3.0, 6.0 * keyed_uniform(77, 4 * k + 1) - 3.0,
          6.0 * keyed_uniform(77, 4 * k + 2) - 3.0);
  return xi.norm() < 0.3 ? Vec3(0.3, 0.1, -0.2) : xi;
}

TEST(Symbols, AdmissibleAlphaRange) {
  EXPECT_DOUBLE_EQ(PhysicalParams::alpha_upper(2.0), 0.875);
  EXPECT_DOUBLE_EQ(PhysicalParams::alpha_upper(kInfinity), 1.25);
  EXPECT_NO_THROW(PhysicalParams::checked(1.0, 0.75, 3.0, 2.0));
  EXPECT_THROW(PhysicalParams::checked(1.0, 1.0, 0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(PhysicalParams::checked(1.0, 0.5, 0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(PhysicalParams::checked(0.0, 0.75, 0.0, 2.0), std::invalid_argument);
}

TEST(Symbols, SemigroupMatchesClosedForm) {
  const PhysicalParams p{0.8, 0.7, 6.0};
  for (std::uint64_t k = 0; k < 200; ++k) {
    const Vec3 xi = random_xi(k);
    const double t = 0.05 + 0.02 * static_cast<double>(k % 17);
    const Mat3 diff = semigroup_symbol(xi, t, p) - oracle::semigroup(xi, t, p.nu, p.alpha, p.omega);
    ASSERT_LT(diff.cwiseAbs().maxCoeff(), 1e-14);
  }
  EXPECT_THROW(semigroup_symbol(Vec3(1, 0, 0), -1.0, p), std::invalid_argument);
}

TEST(Symbols, PairActionAgreesWithMatrixOnComplexVectors) {
  const PhysicalParams p{1.0, 0.75, 4.0};
  for (std::uint64_t k = 0; k < 50; ++k) {
    const Vec3 xi = random_xi(k);
    const CVec3 v(Complex(0.3, -1.1), Complex(-0.4, 0.2), Complex(0.9, 0.5));
    const auto pair = semigroup_coefficients(xi, 0.4, p);
    const CVec3 a = pair.apply(xi.normalized(), v);
    const CVec3 b = pair.matrix(xi).cast<Complex>() * v;
    ASSERT_LT((a - b).norm(), 1e-15);
  }
}

TEST(Symbols, RotationMatrixIsSkewAndSquaresToMinusTransverseProjector) {
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Vec3 xi = random_xi(k);
    const Mat3 r = rotation_matrix(xi);
    EXPECT_LT((r + r.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((r * r + leray_symbol(xi)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((r - oracle::rotation(xi)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Symbols, DuhamelWeightDifferentiatesToSemigroup) {
  const PhysicalParams p{0.6, 0.8, 12.0};
  for (std::uint64_t k = 0; k < 30; ++k) {
    const Vec3 xi = random_xi(k);
    const double h = 0.3;
    auto comp = [&](int which) {
      return [&, which](double t) {
        const auto c = duhamel_coefficients(xi, t, p);
        return which == 0 ? c.identity : c.rotation;
      };
    };
    const auto s = semigroup_coefficients(xi, h, p);
    EXPECT_NEAR(oracle::derivative(comp(0), h, 1e-3), s.identity, 1e-9);
    EXPECT_NEAR(oracle::derivative(comp(1), h, 1e-3), s.rotation, 1e-9);
    // Small-λ branch against quadrature.
    const auto w = duhamel_coefficients(xi, h, p);
    const double lambda = p.nu * std::pow(xi.squaredNorm(), p.alpha);
    const double b = p.omega * xi[2] / xi.norm();
    const auto q = oracle::adaptive_simpson<Complex>(
        [&](double t) { return std::exp(Complex(-lambda * t, b * t)); }, 0.0, h, 1e-16);
    EXPECT_NEAR(w.identity, q.real(), 1e-13);
    EXPECT_NEAR(w.rotation, q.imag(), 1e-13);
  }
  EXPECT_EQ(duhamel_coefficients(Vec3(1, 2, 3), 0.0, p).identity, 0.0);
}

TEST(Symbols, StationaryKernelIsTheSemigroupIntegral) {
  for (std::uint64_t k = 0; k < 100; ++k) {
    const Vec3 xi = random_xi(k);
    const PhysicalParams p{0.5 + keyed_uniform(5, k), 0.55 + 0.3 * keyed_uniform(6, k), 30.0 * keyed_uniform(7, k) - 15.0};
    const Mat3 exact = stationary_kernel(xi, p);
    const Mat3 quad = oracle::semigroup_integral(xi, p.nu, p.alpha, p.omega);
    ASSERT_LT((exact - quad).cwiseAbs().maxCoeff(), 1e-11 * std::max(1.0, exact.cwiseAbs().maxCoeff()));
    const auto c = kernel_coefficients(xi, p);
    const double cap = std::pow(xi.norm(), -2.0 * p.alpha) / p.nu;
    EXPECT_LE(std::abs(c.identity), cap * (1.0 + 1e-15));
    EXPECT_LE(std::abs(c.rotation), cap * (1.0 + 1e-15));
  }
}

TEST(Symbols, XWeightsAtZeroRotationReduceToForceWeight) {
  const PhysicalParams p{0.7, 0.75, 0.0};
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Vec3 xi = random_xi(k);
    const auto w = x_weight_coefficients(xi, p, 2.0);
    EXPECT_NEAR(w.w1, std::pow(xi.norm(), -0.5) / p.nu, 1e-13 * w.w1);
    EXPECT_EQ(w.w2, 0.0);
  }
}

TEST(Symbols, XWeightsMatchTheirDefinition) {
  const PhysicalParams p{0.9, 0.8, 25.0};
  const double pe = 3.0;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Vec3 xi = random_xi(k);
    const double r = xi.norm();
    const double den = p.nu * p.nu * std::pow(r, 4.0 * p.alpha + 2.0) + p.omega * p.omega * xi[2] * xi[2];
    const auto w = x_weight_coefficients(xi, p, pe);
    EXPECT_NEAR(w.w1, p.nu * std::pow(r, 6.0 - 3.0 / pe) / den, 1e-13 * w.w1);
    EXPECT_NEAR(std::abs(w.w2), p.omega * std::abs(xi[2]) * std::pow(r, 5.0 - 2.0 * p.alpha - 3.0 / pe) / den,
                1e-13 * std::max(1e-300, std::abs(w.w2)));
  }
}

TEST(Symbols, XNormPartsObeyTheKernelBound) {
  // Each part is at most c_s/ν times the force norm, c_s the worst ratio of
  // |ξ|^s to 2^{js} on a shell; at the default α the sum stays below 1/ν.
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  for (double alpha : {0.6, 0.75, 0.85}) {
    const auto idx = FBParams::critical_force(alpha, 2.0, 2.0);
    const double cs = std::max(std::pow(0.75, idx.s), std::pow(8.0 / 3.0, idx.s));
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      BandSpec band{1, 1 + static_cast<int>(seed), false, 0.0};
      band.planar = seed % 3 == 1;
      band.off_axis = seed % 3 == 2;
      const auto f = random_band_field(g, 300 + seed, band);
      const double fb = fb_norm(f, idx, frame);
      for (double omega : {0.0, 3.0, 100.0, 1e4}) {
        const PhysicalParams p{0.7, alpha, omega};
        const auto parts = x_shell_norms(f, p, 2.0, frame);
        const double a = combine_shells(parts.w1, frame.j_min(), 0.0, 2.0);
        const double b = combine_shells(parts.w2, frame.j_min(), 0.0, 2.0);
        EXPECT_LE(a, cs * fb / p.nu * (1.0 + 1e-12));
        EXPECT_LE(b, cs * fb / p.nu * (1.0 + 1e-12));
        EXPECT_NEAR(x_norm(f, p, idx, frame), a + b, 1e-12 * (a + b));
        if (alpha == 0.75) EXPECT_LE(a + b, fb / p.nu);
      }
    }
  }
}

}  // namespace
}  // namespace fnsc
