#include <gtest/gtest.h>

#include <cmath>

#include "fnsc/data_gen.hpp"
#include "fnsc/mild_solver.hpp"
#include "fnsc/stationary_solver.hpp"
#include "oracles.hpp"

namespace fnsc {
namespace {

SolverConfig small_config(double T = 1.0) {
  SolverConfig c;
  c.params = {1.0, 0.75, 5.0};
  c.dt = 0.01;
  c.T = T;
  c.K = 0.12;
  c.epsilon = 0.9 / (4.0 * c.K);
  c.record_every = 10;
  return c;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

TEST(SolverConfig, Validation) {
  auto c = small_config();
  EXPECT_NO_THROW(c.validate());
  c.epsilon = 1.0 / (4.0 * c.K);
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.gate = false;
  EXPECT_NO_THROW(c.validate());
  c = small_config();
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.params.alpha = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(MildSolver, ZeroDataStayZero) {
  const FrequencyGrid g(16);
  const SpectralField zero(g);
  const auto traj = evolve(zero, FieldSeries{{0.0, zero}}, small_config());
  for (const auto& r : traj.norms.rows) EXPECT_EQ(r.fb_norm_critical, 0.0);
  EXPECT_TRUE(traj.states.back().field.is_zero());
  EXPECT_EQ(traj.norms.rows.back().time, 1.0);
}

TEST(MildSolver, LinearProblemIsTheSemigroup) {
  const FrequencyGrid g(16);
  const auto u0 = random_band_field(g, 3, BandSpec{1, 5, false, 0.0});
  auto c = small_config(0.5);
  c.nonlinear = false;
  const auto traj = evolve(u0, FieldSeries{{0.0, SpectralField(g)}}, c);
  const auto exact = apply_semigroup(u0, 0.5, c.params);
  EXPECT_LT(max_diff(traj.states.back().field, exact), 1e-12 * u0.max_magnitude());
}

TEST(MildSolver, RejectsCompressibleData) {
  const FrequencyGrid g(8);
  SpectralField u(g);
  u.at(0, g.flat_index(1, 0, 0)) = 1.0;
  u.at(0, g.flat_index(-1, 0, 0)) = 1.0;
  EXPECT_THROW(evolve(u, FieldSeries{{0.0, SpectralField(g)}}, small_config()), std::invalid_argument);
}

TEST(MildSolver, GateReportAndRefusal) {
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  auto c = small_config();
  const auto idx = c.velocity_index();
  const auto big = normalized(random_band_field(g, 2, BandSpec{1, 4, false, 0.0}), c.epsilon, idx, frame);
  const FieldSeries f{{0.0, SpectralField(g)}};
  const auto gate = theorem1_gate(big, f, c);
  EXPECT_FALSE(gate.passed);
  EXPECT_NEAR(gate.u0_norm, c.epsilon, 1e-12);
  EXPECT_THROW(stability_experiment(big, big, f, f, c), GateRefusal);
}

TEST(MildSolver, ForceMismatchIsFlagged) {
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  auto c = small_config(2.0);
  const auto u0 = normalized(random_band_field(g, 2, BandSpec{1, 4, false, 0.0}), 0.3 * c.epsilon,
                             c.velocity_index(), frame);
  const auto f = normalized(random_band_field(g, 3, BandSpec{1, 4, false, 0.0}), 0.2 * c.epsilon,
                            c.force_index(), frame);
  const auto df = normalized(random_band_field(g, 4, BandSpec{1, 4, false, 0.0}), 0.05 * c.epsilon,
                             c.force_index(), frame);
  const auto rep = stability_experiment(u0, u0, FieldSeries{{0.0, f}}, FieldSeries{{0.0, f + df}}, c);
  EXPECT_FALSE(rep.hypothesis_holds);
  EXPECT_NEAR(rep.force_gap_ratio, 1.0, 1e-12);
  EXPECT_FALSE(rep.note.empty());
}

TEST(Stationary, LinearResponseIsTheKernel) {
  const FrequencyGrid g(16);
  const auto f = random_band_field(g, 8, BandSpec{1, 4, false, 0.0});
  auto c = small_config();
  const auto r = stationary_picard(f, c, std::nullopt, false);
  EXPECT_LT(max_diff(r.u, apply_kernel(leray_project(f), c.params)), 1e-15 * r.u.max_magnitude() + 1e-300);
}

TEST(Stationary, SolutionSatisfiesTheFixedPointAndEvolutionForms) {
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  auto c = small_config();
  c.picard_tol = 1e-13;
  const auto f = normalized(random_band_field(g, 8, BandSpec{1, 4, false, 0.0}), 0.5, c.force_index(), frame);
  const auto r = stationary_picard(f, c);
  ASSERT_TRUE(r.converged);
  const auto image = apply_kernel(leray_project(f) - projected_transport(r.u, r.u), c.params);
  EXPECT_LE(fb_norm(r.u - image, c.velocity_index(), frame), 1e-12);
  const std::vector<double> times{0.5, 1.0, 2.0};
  EXPECT_LE(verify_stationary_equivalence(r.u, f, times, c.params, c.velocity_index()), 1e-11);
}

TEST(Stationary, RegionsPartitionTheLattice) {
  const FrequencyGrid g(16);
  const auto m = region_decomposition(g, 0.3);
  for (std::size_t i = 1; i < g.size(); ++i) ASSERT_EQ(m.a[i] + m.b[i] + m.c[i], 1);
  for (std::size_t i = 1; i < g.size(); ++i) {
    const Vec3 xi = g.wavevector(i);
    if (std::abs(xi[2]) <= 0.3) ASSERT_EQ(m.c[i], 1);
    else if (xi.norm() > 1.0 / 0.3) ASSERT_EQ(m.b[i], 1);
  }
  EXPECT_THROW(region_decomposition(g, 0.0), std::invalid_argument);
}

TEST(OmegaScan, PlanarForceHasNoThreshold) {
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  const PhysicalParams p{1.0, 0.75, 0.0};
  const auto idx = FBParams::critical_force(0.75, 2.0, 2.0);
  const auto f = normalized(random_band_field(g, 1, BandSpec{1, 3, true, 0.0}), 50.0, idx, frame);
  OmegaScanOptions o;
  o.omega_max = 1e5;
  const auto scan = estimate_omega_threshold(f, p, idx, 1.0, o);
  EXPECT_FALSE(scan.omega_threshold.has_value());
  EXPECT_TRUE(scan.hypothesis_holds);
  EXPECT_FALSE(scan.tail_value.has_value());
  for (double x : scan.x_norms) EXPECT_NEAR(x, scan.x_norms.front(), 1e-12 * x);
}

TEST(OmegaScan, HypothesisDependsOnTheSummationIndex) {
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  const PhysicalParams p{1.0, 0.75, 0.0};
  BandSpec band{1, 3, false, 0.0};
  band.off_axis = true;
  OmegaScanOptions o;
  o.omega_max = 64.0;
  auto idx = FBParams::critical_force(0.75, 2.0, 2.0);
  idx.q = 1.0;
  const auto f = normalized(random_band_field(g, 1, band), 5.0, idx, frame);
  EXPECT_FALSE(estimate_omega_threshold(f, p, idx, 1.0, o).hypothesis_holds);
  idx.q = kInfinity;
  o.tail_shells = 0;
  const auto big = estimate_omega_threshold(f, p, idx, 1e-3, o);
  ASSERT_TRUE(big.tail_value.has_value());
  EXPECT_FALSE(big.hypothesis_holds);
  o.tail_shells = 10;
  const auto small = estimate_omega_threshold(f, p, idx, 1.0, o);
  EXPECT_EQ(*small.tail_value, 0.0);
  EXPECT_TRUE(small.hypothesis_holds);
}

TEST(OmegaScan, OffAxisForceDecaysLikeOneOverOmega) {
  const FrequencyGrid g(16);
  const LPFrame frame(g);
  const PhysicalParams p{1.0, 0.75, 0.0};
  const auto idx = FBParams::critical_force(0.75, 2.0, 2.0);
  BandSpec band{1, 3, false, 0.0};
  band.off_axis = true;
  const auto f = normalized(random_band_field(g, 1, band), 50.0, idx, frame);
  OmegaScanOptions o;
  o.omega_max = 1e6;
  const auto scan = estimate_omega_threshold(f, p, idx, 1.0, o);
  ASSERT_TRUE(scan.omega_threshold.has_value());
  EXPECT_LE(scan.x_norms[*scan.threshold_index], 1.0);
  if (*scan.threshold_index > 0) EXPECT_GT(scan.x_norms[*scan.threshold_index - 1], 1.0);
  for (std::size_t k = 0; k + 1 < scan.omegas.size(); ++k)
    if (scan.omegas[k] >= 1e3) EXPECT_NEAR(scan.x_norms[k + 1] / scan.x_norms[k], 0.5, 0.025);
  // Single mode on the axis: x_norm in closed form from the weights.
  SpectralField axis(g);
  axis.at(0, g.flat_index(0, 0, 1)) = 1.0;
  axis.at(0, g.flat_index(0, 0, -1)) = 1.0;
  const PhysicalParams rot{1.0, 0.75, 8.0};
  const auto w = x_weight_coefficients(Vec3(0, 0, 1), rot, 2.0);
  // Both sites sit at |ξ| = 1, shared by φ₋₁ = χ(1) and φ₀ = 1 - χ(1).
  const double c = lp_chi(1.0);
  const double site = std::sqrt(2.0 * g.quadrature_weight()) * std::hypot(c, 1.0 - c);
  EXPECT_NEAR(x_norm(axis, rot, idx, frame), (w.w1 + std::abs(w.w2)) * site, 1e-12);
}

}  // namespace
}  // namespace fnsc
