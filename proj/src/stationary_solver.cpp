#include "fnsc/stationary_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace fnsc {
namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

SpectralField linear_response(const SymbolTable& kernel, const SpectralField& force) {
  return kernel.apply(leray_project(force));
}

// (2/ν)‖(‖φ_j |ξ|^s F̂ 1_mask‖_{L^p})_j‖_{ℓ^q}: the Ω-uniform bound on the
// X-norm contribution of the masked sites, since w₁ and w₂ are both at most
// |ξ|^s/ν with s the force index.
double outer_region_bound(const SpectralField& force, const SiteMask& mask, const PhysicalParams& params,
                          const FBParams& index, const LPFrame& frame) {
  const auto& g = force.grid();
  SpectralField weighted(g);
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!mask[i]) continue;
    const double w = std::pow(g.wavenumber(i), index.s);
    for (std::size_t c = 0; c < 3; ++c) weighted.at(c, i) = w * force.at(c, i);
  }
  const auto a = shell_norms(weighted, index.p, frame);
  return 2.0 / params.nu * combine_shells(a, frame.j_min(), 0.0, index.q);
}

SiteMask outer_mask(const RegionMasks& m, const SpectralField& force) {
  const double cutoff = 1e-14;
  SiteMask out(m.b.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (m.b[i] || m.c[i]) && force.magnitude(i) > cutoff;
  return out;
}

}  // namespace

StationaryResult stationary_picard(const SpectralField& force, const SolverConfig& config,
                                   std::optional<SpectralField> start, bool nonlinear) {
  config.params.validate(config.p);
  const auto& grid = force.grid();
  const LPFrame frame(grid);
  const FBParams velocity = config.velocity_index();
  const auto kernel = SymbolTable::tabulate(grid, [&](const Vec3& xi) {
    return kernel_coefficients(xi, config.params);
  });
  const SpectralField y = linear_response(kernel, force);
  auto bilinear = [&](const SpectralField& u, const SpectralField& v) {
    if (!nonlinear) return SpectralField(grid);
    SpectralField out = kernel.apply(projected_transport(u, v));
    out *= -1.0;
    return out;
  };
  auto norm = [&](const SpectralField& f) { return fb_norm(f, velocity, frame); };
  auto r = picard_solve(y, bilinear, norm, config.K, config.picard_tol, config.picard_max_iter,
                        std::move(start));
  StationaryResult out{std::move(r.point), r.residual, r.iterations, r.converged, r.gate_held,
                       std::move(r.residual_history), std::move(r.warning)};
  return out;
}

double verify_stationary_equivalence(const SpectralField& u, const SpectralField& force,
                                     std::span<const double> t_samples, const PhysicalParams& params,
                                     const FBParams& velocity) {
  const LPFrame frame(u.grid());
  SpectralField source = leray_project(force);
  source -= projected_transport(u, u);
  double worst = 0.0;
  for (double t : t_samples) {
    SpectralField rhs = apply_semigroup(u, t, params);
    rhs += apply_duhamel(source, t, params);
    worst = std::max(worst, fb_norm(u - rhs, velocity, frame));
  }
  return worst;
}

UniquenessReport uniqueness_probe(const SpectralField& force, const SolverConfig& config,
                                  std::size_t n_starts, std::uint64_t seed) {
  UniquenessReport rep;
  const auto& grid = force.grid();
  const LPFrame frame(grid);
  const FBParams velocity = config.velocity_index();
  for (std::size_t k = 0; k < n_starts; ++k) {
    std::optional<SpectralField> start;
    if (k > 0) {
      const double radius = 2.0 * config.epsilon * keyed_uniform(seed, 0xfeed0000ULL + k);
      BandSpec band{1, 4, false, 0.0};
      start = normalized(random_band_field(grid, seed + 7919 * k, band), radius, velocity, frame);
    }
    rep.runs.push_back(stationary_picard(force, config, std::move(start)));
  }
  rep.all_converged = std::all_of(rep.runs.begin(), rep.runs.end(),
                                  [](const StationaryResult& r) { return r.converged; });
  for (std::size_t a = 0; a < rep.runs.size(); ++a)
    for (std::size_t b = a + 1; b < rep.runs.size(); ++b)
      rep.spread = std::max(rep.spread, fb_norm(rep.runs[a].u - rep.runs[b].u, velocity, frame));
  return rep;
}

RegionMasks region_decomposition(const FrequencyGrid& grid, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("region_decomposition: delta must be positive");
  RegionMasks m{SiteMask(grid.size(), 0), SiteMask(grid.size(), 0), SiteMask(grid.size(), 0)};
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const Vec3 xi = grid.wavevector(i);
    const double r = xi.norm();
    if (std::abs(xi[2]) <= delta) {
      m.c[i] = 1;
    } else if (r > 1.0 / delta) {
      m.b[i] = 1;
    } else {
      m.a[i] = 1;
    }
  }
  return m;
}

std::string OmegaScanResult::to_csv() const {
  std::ostringstream os;
  os << "omega,x_norm,region_A,region_B,region_C\n";
  for (std::size_t k = 0; k < omegas.size(); ++k)
    os << format_double(omegas[k]) << ',' << format_double(x_norms[k]) << ','
       << format_double(region_a[k]) << ',' << format_double(region_b[k]) << ','
       << format_double(region_c[k]) << '\n';
  return os.str();
}

OmegaScanResult estimate_omega_threshold(const SpectralField& force, const PhysicalParams& params,
                                         const FBParams& force_index, double epsilon,
                                         const OmegaScanOptions& options) {
  force_index.validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("estimate_omega_threshold: epsilon must be positive");
  if (!(options.factor > 1.0) || !(options.omega_min > 0.0) || options.omega_max < options.omega_min)
    throw std::invalid_argument("estimate_omega_threshold: bad scan range");
  const auto& grid = force.grid();
  const LPFrame frame(grid);
  OmegaScanResult res;
  res.epsilon = epsilon;

  // δ: largest value whose B∪C bound stays within ε/3, by bisection in log δ.
  auto bound_at = [&](double d) {
    return outer_region_bound(force, outer_mask(region_decomposition(grid, d), force), params,
                              force_index, frame);
  };
  double lo = 1e-6 * grid.base_wavenumber();
  double hi = grid.max_wavenumber();
  if (bound_at(lo) > epsilon / 3.0) {
    res.delta = lo;
    res.delta_found = false;
  } else if (bound_at(hi) <= epsilon / 3.0) {
    res.delta = hi;
    res.delta_found = true;
  } else {
    for (int it = 0; it < 80; ++it) {
      const double mid = std::sqrt(lo * hi);
      (bound_at(mid) <= epsilon / 3.0 ? lo : hi) = mid;
    }
    res.delta = lo;
    res.delta_found = true;
  }
  res.outer_bound = bound_at(res.delta);

  // Ω₀ from the A_δ estimates: each of the two weighted pieces is at most
  // ε/6 once Ω²δ² exceeds the printed numerators.
  if (res.delta_found) {
    const double d = res.delta;
    const double fnorm = fb_norm(force, force_index, frame);
    const double a = params.alpha;
    const double nu = params.nu;
    const double base = nu * nu * std::pow(d, 4.0 * a + 2.0);
    const double need1 = 6.0 * std::pow(1.0 / d, 4.0 * a + 2.0) * fnorm / epsilon - base;
    const double need2 = 6.0 * nu * std::pow(1.0 / d, 2.0 * a + 2.0) * fnorm / epsilon - base;
    res.analytic_omega0 = std::sqrt(std::max({0.0, need1, need2})) / d;
  }

  const auto masks = region_decomposition(grid, res.delta);
  const std::size_t count =
      1 + static_cast<std::size_t>(std::floor(std::log(options.omega_max / options.omega_min) /
                                              std::log(options.factor) + 1e-9));
  for (std::size_t k = 0; k < count; ++k) {
    PhysicalParams p = params;
    p.omega = options.omega_min * std::pow(options.factor, static_cast<double>(k));
    res.omegas.push_back(p.omega);
    res.x_norms.push_back(x_norm(force, p, force_index, frame));
    res.region_a.push_back(x_norm(force, p, force_index, frame, masks.a));
    res.region_b.push_back(x_norm(force, p, force_index, frame, masks.b));
    res.region_c.push_back(x_norm(force, p, force_index, frame, masks.c));
    if (!res.omega_threshold && res.x_norms.back() <= epsilon) {
      res.omega_threshold = p.omega;
      res.threshold_index = k;
    }
  }

  if (std::isinf(force_index.q)) {
    PhysicalParams p = params;
    p.omega = res.omegas.back();
    const auto shells = x_shell_norms(force, p, force_index.p, frame);
    double tail = 0.0;
    for (int j = frame.j_min(); j <= frame.j_max(); ++j) {
      if (std::abs(j) <= options.tail_shells) continue;
      const std::size_t s = static_cast<std::size_t>(j - frame.j_min());
      tail = std::max(tail, shells.w1[s] + shells.w2[s]);
    }
    res.tail_value = tail;
  }
  res.hypothesis_holds = std::isinf(force_index.q) ? !std::isinf(force_index.p) && *res.tail_value < epsilon / 3.0
                                                   : force_index.q == force_index.p;
  return res;
}

ConvergenceReport converge_to_stationary_experiment(const SpectralField& v0,
                                                    std::span<const TimedField> g_series,
                                                    const SpectralField& force,
                                                    const SolverConfig& config) {
  ConvergenceReport rep;
  rep.stationary = stationary_picard(force, config);
  if (!rep.stationary.converged)
    throw GateRefusal("converge_to_stationary: stationary solve did not converge (" +
                      rep.stationary.warning + ")");
  const auto gate = theorem1_gate(v0, g_series, config);
  if (!gate.passed)
    throw GateRefusal("converge_to_stationary: |v0| + |G| = " +
                      format_double(gate.u0_norm + gate.force_norm) + " is not below epsilon = " +
                      format_double(config.epsilon));
  const auto traj = evolve(v0, g_series, config);
  const LPFrame frame(v0.grid());
  const FBParams velocity = config.velocity_index();
  const FBParams force_index = config.force_index();
  const SpectralField& u_inf = rep.stationary.u;

  rep.series = traj.norms;
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    rep.series.rows[k].gap_norm = fb_norm(traj.states[k].field - u_inf, velocity, frame);
  rep.initial_gap = rep.series.rows.front().gap_norm;
  rep.final_gap = rep.series.rows.back().gap_norm;
  rep.converged = rep.final_gap <= 1e-3 * rep.initial_gap;

  const SpectralField d0 = v0 - u_inf;
  const double n0 = fb_norm(d0, velocity, frame);
  rep.linear_gap_ratio = n0 > 0.0 ? fb_norm(apply_semigroup(d0, config.T, config.params), velocity, frame) / n0 : 0.0;
  double peak = 0.0;
  double last = 0.0;
  for (const auto& s : traj.states) {
    last = fb_norm(force_at(g_series, s.time) - force, force_index, frame);
    peak = std::max(peak, last);
  }
  rep.force_gap_ratio = peak > 0.0 ? last / peak : 0.0;
  rep.hypothesis_holds = rep.linear_gap_ratio <= 1e-3 && rep.force_gap_ratio <= 1e-3;
  return rep;
}

double measured_forcing_constant(const FrequencyGrid& grid, const SolverConfig& config,
                                 std::uint64_t corpus_seed) {
  return measure_forcing_constant(grid, corpus_seed, config.params, config.velocity_index(),
                                  config.force_index())
      .constant;
}

}  // namespace fnsc
