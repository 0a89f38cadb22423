#include "fnsc/mild_solver.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace fnsc {
namespace {

constexpr double kDivergenceTolerance = 1e-10;
constexpr double kRunawayMagnitude = 1e150;

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

NormRow measure(const SpectralField& u, const FBParams& velocity, const LPFrame& frame) {
  NormRow row;
  row.time = u.time_tag();
  row.fb_norm_critical = fb_norm(u, velocity, frame);
  row.divergence_residual = divergence_defect(u);
  row.energy = energy(u);
  return row;
}

}  // namespace

void SolverConfig::validate() const {
  params.validate(p);
  if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
  if (!(T >= dt)) throw std::invalid_argument("SolverConfig: horizon T must be at least dt");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("SolverConfig: picard_tol must be positive");
  if (picard_max_iter < 1) throw std::invalid_argument("SolverConfig: picard_max_iter must be >= 1");
  if (record_every < 1) throw std::invalid_argument("SolverConfig: record_every must be >= 1");
  if (gate && !(4.0 * K * epsilon < 1.0))
    throw std::invalid_argument("SolverConfig: gate requires epsilon < 1/(4K)");
  velocity_index().validate();
}

bool NormSeries::has_gap() const {
  for (const auto& r : rows)
    if (!std::isnan(r.gap_norm)) return true;
  return false;
}

std::string NormSeries::to_csv() const {
  std::ostringstream os;
  os << "time,fb_norm_critical,gap_norm,divergence_residual,energy\n";
  for (const auto& r : rows) {
    os << format_double(r.time) << ',' << format_double(r.fb_norm_critical) << ','
       << (std::isnan(r.gap_norm) ? std::string{} : format_double(r.gap_norm)) << ','
       << format_double(r.divergence_residual) << ',' << format_double(r.energy) << '\n';
  }
  return os.str();
}

EtdStepper::EtdStepper(const FrequencyGrid& grid, double h, const PhysicalParams& params, bool nonlinear)
    : grid_(grid),
      h_(h),
      nonlinear_(nonlinear),
      params_(params),
      semigroup_(SymbolTable::tabulate(grid, [&](const Vec3& xi) {
        return semigroup_coefficients(xi, h, params);
      })),
      weights_(SymbolTable::tabulate(grid, [&](const Vec3& xi) {
        return duhamel_coefficients(xi, h, params);
      })) {}

SpectralField EtdStepper::advance(const SpectralField& u, const SpectralField& force) const {
  SpectralField source = leray_project(force);
  if (nonlinear_) source -= projected_transport(u, u);
  SpectralField next = semigroup_.apply(u);
  next += weights_.apply(source);
  next.set_time_tag(u.time_tag() + h_);
  return next;
}

Trajectory evolve(const SpectralField& u0, std::span<const TimedField> force, const SolverConfig& config) {
  config.params.validate(config.p);
  if (!(config.dt > 0.0) || !(config.T >= config.dt))
    throw std::invalid_argument("evolve: need dt > 0 and T >= dt");
  if (config.record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
  if (divergence_defect(u0) > kDivergenceTolerance)
    throw std::invalid_argument("evolve: initial field is not divergence-free");
  if (u0.magnitude(0) != 0.0) throw std::invalid_argument("evolve: initial field has a nonzero mean");
  const auto& grid = u0.grid();
  const SpectralField zero(grid);
  auto force_now = [&](double t) -> const SpectralField& {
    return force.empty() ? zero : force_at(force, t);
  };

  const LPFrame frame(grid);
  const FBParams velocity = config.velocity_index();
  const EtdStepper stepper(grid, config.dt, config.params, config.nonlinear);
  const auto steps = static_cast<std::size_t>(std::ceil(config.T / config.dt - 1e-9));

  Trajectory out;
  SpectralField u = u0;
  u.set_time_tag(0.0);
  auto record = [&] {
    out.norms.rows.push_back(measure(u, velocity, frame));
    out.states.push_back({u.time_tag(), u});
  };
  record();
  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = u.time_tag();
    const double h = std::min(config.dt, config.T - t);
    if (h == config.dt) {
      u = stepper.advance(u, force_now(t));
    } else {
      u = EtdStepper(grid, h, config.params, config.nonlinear).advance(u, force_now(t));
    }
    // Land exactly on the nominal time grid so recorded times are reproducible.
    u.set_time_tag(n == steps ? config.T : static_cast<double>(n) * config.dt);
    if (config.reproject_every > 0 && n % static_cast<std::size_t>(config.reproject_every) == 0)
      u = leray_project(u);
    const bool at_record = n % static_cast<std::size_t>(config.record_every) == 0 || n == steps;
    if (at_record) {
      if (!u.all_finite() || u.max_magnitude() > kRunawayMagnitude)
        throw NumericalDivergence("evolve: non-finite or runaway values at t=" + format_double(u.time_tag()));
      record();
    }
  }
  return out;
}

GateReport theorem1_gate(const SpectralField& u0, std::span<const TimedField> force,
                         const SolverConfig& config) {
  const LPFrame frame(u0.grid());
  GateReport r;
  r.epsilon = config.epsilon;
  r.u0_norm = fb_norm(u0, config.velocity_index(), frame);
  r.force_norm = force.empty() ? 0.0
                               : time_fb_norm(force, config.force_index(), frame, TimeNormMode::shell_first);
  r.passed = r.u0_norm + r.force_norm < r.epsilon || (r.u0_norm == 0.0 && r.force_norm == 0.0);
  return r;
}

std::vector<double> gap_series(const Trajectory& a, const Trajectory& b, const FBParams& velocity,
                               const LPFrame& frame) {
  if (a.states.size() != b.states.size())
    throw std::invalid_argument("gap_series: trajectories recorded on different schedules");
  std::vector<double> out;
  out.reserve(a.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k)
    out.push_back(fb_norm(a.states[k].field - b.states[k].field, velocity, frame));
  return out;
}

StabilityReport stability_experiment(const SpectralField& u0, const SpectralField& v0,
                                     std::span<const TimedField> force_u,
                                     std::span<const TimedField> force_v, const SolverConfig& config) {
  StabilityReport rep;
  rep.gate_u = theorem1_gate(u0, force_u, config);
  rep.gate_v = theorem1_gate(v0, force_v, config);
  if (!rep.gate_u.passed || !rep.gate_v.passed)
    throw GateRefusal("stability_experiment: data fail the smallness gate (|u0|+|F| = " +
                      format_double(rep.gate_u.u0_norm + rep.gate_u.force_norm) + ", |v0|+|G| = " +
                      format_double(rep.gate_v.u0_norm + rep.gate_v.force_norm) +
                      ", epsilon = " + format_double(config.epsilon) + ")");
  const auto tu = evolve(u0, force_u, config);
  const auto tv = evolve(v0, force_v, config);
  const LPFrame frame(u0.grid());
  const FBParams velocity = config.velocity_index();
  const FBParams force_index = config.force_index();
  const auto gaps = gap_series(tu, tv, velocity, frame);

  rep.series = tu.norms;
  for (std::size_t k = 0; k < gaps.size(); ++k) rep.series.rows[k].gap_norm = gaps[k];
  rep.initial_gap = gaps.front();
  rep.final_gap = gaps.back();
  rep.gap_decayed = rep.final_gap <= 1e-3 * rep.initial_gap;

  const SpectralField diff0 = u0 - v0;
  const double d0 = fb_norm(diff0, velocity, frame);
  rep.linear_gap_ratio = d0 > 0.0 ? fb_norm(apply_semigroup(diff0, config.T, config.params), velocity, frame) / d0 : 0.0;

  const SpectralField zero(u0.grid());
  double peak = 0.0;
  for (const auto& s : tu.states) {
    const auto& f = force_u.empty() ? zero : force_at(force_u, s.time);
    const auto& g = force_v.empty() ? zero : force_at(force_v, s.time);
    rep.force_gap.push_back(fb_norm(f - g, force_index, frame));
    peak = std::max(peak, rep.force_gap.back());
  }
  rep.force_gap_ratio = peak > 0.0 ? rep.force_gap.back() / peak : 0.0;
  rep.hypothesis_holds = rep.linear_gap_ratio <= 1e-3 && rep.force_gap_ratio <= 1e-3;
  if (!rep.hypothesis_holds)
    rep.note = "decay hypothesis not met along the run (semigroup gap ratio " +
               format_double(rep.linear_gap_ratio) + ", force gap ratio " +
               format_double(rep.force_gap_ratio) + "); no decay is asserted";
  return rep;
}

}  // namespace fnsc
