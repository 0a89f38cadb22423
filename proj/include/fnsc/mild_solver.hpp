#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fnsc/lp_frame.hpp"
#include "fnsc/nonlinear.hpp"
#include "fnsc/picard.hpp"
#include "fnsc/symbols.hpp"

namespace fnsc {

/// Raised when a run produces non-finite or runaway values.
class NumericalDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  PhysicalParams params{};
  double p = 2.0;
  double q = 2.0;
  double dt = 0.01;
  double T = 10.0;
  double picard_tol = 1e-10;
  int picard_max_iter = 200;
  double K = 0.0;        ///< empirical bilinear constant
  double epsilon = 0.0;  ///< smallness threshold, ε < 1/(4K) when gated
  int record_every = 50;
  int reproject_every = 100;
  bool nonlinear = true;  ///< false drops B(u, u), leaving the linear problem
  bool gate = true;

  FBParams velocity_index() const { return FBParams::critical_velocity(params.alpha, p, q); }
  FBParams force_index() const { return FBParams::critical_force(params.alpha, p, q); }

  /// Throws std::invalid_argument on dt <= 0, T < dt, bad physics, or
  /// 4Kε >= 1 with the gate enabled.
  void validate() const;
};

struct NormRow {
  double time = 0.0;
  double fb_norm_critical = 0.0;
  double gap_norm = std::numeric_limits<double>::quiet_NaN();  ///< NaN when not applicable
  double divergence_residual = 0.0;
  double energy = 0.0;
};

struct NormSeries {
  std::string run_id;
  std::vector<NormRow> rows;

  bool has_gap() const;
  /// Columns time, fb_norm_critical, gap_norm, divergence_residual, energy
  /// with 17 significant digits; gap_norm is left empty when absent.
  std::string to_csv() const;
};

struct Trajectory {
  FieldSeries states;
  NormSeries norms;
};

/// Fixed-step ETD1 integrator for u' = -ν(-Δ)^α u - Ωe₃×u - P(u·∇)u + PF
/// in mild form:
///   u_{n+1} = S(h)u_n + W(h)·P̂[F̂(t_n) - iξ·(u_n⊗u_n)^].
class EtdStepper {
 public:
  EtdStepper(const FrequencyGrid& grid, double h, const PhysicalParams& params, bool nonlinear);

  double step_size() const { return h_; }
  SpectralField advance(const SpectralField& u, const SpectralField& force) const;

 private:
  FrequencyGrid grid_;
  double h_;
  bool nonlinear_;
  PhysicalParams params_;
  SymbolTable semigroup_;
  SymbolTable weights_;
};

/// Runs the ETD1 scheme from u0 to config.T. States are recorded at t = 0,
/// every record_every steps and at T. Throws std::invalid_argument for a
/// u0 that is not divergence-free to 1e-10 or has a mean, and
/// NumericalDivergence on non-finite values.
Trajectory evolve(const SpectralField& u0, std::span<const TimedField> force, const SolverConfig& config);

struct GateReport {
  double u0_norm = 0.0;
  double force_norm = 0.0;
  double epsilon = 0.0;
  bool passed = false;
};

/// Theorem-1 smallness check ‖u0‖ + ‖F‖ < ε at the critical velocity and
/// force indices; ‖F‖ is the shell-first time norm over the samples.
GateReport theorem1_gate(const SpectralField& u0, std::span<const TimedField> force,
                         const SolverConfig& config);

/// Raised when an experiment's data fail the smallness gate it presupposes.
class GateRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StabilityReport {
  GateReport gate_u;
  GateReport gate_v;
  NormSeries series;  ///< u's norms with the gap column filled
  double initial_gap = 0.0;
  double final_gap = 0.0;
  bool gap_decayed = false;  ///< final_gap <= 1e-3 · initial_gap
  /// ‖S(T)(u0 - v0)‖ / ‖u0 - v0‖ (0 when the data coincide).
  double linear_gap_ratio = 0.0;
  /// ‖F(T) - G(T)‖ / max_t ‖F(t) - G(t)‖ at the force index (0 when equal).
  double force_gap_ratio = 0.0;
  std::vector<double> force_gap;  ///< ‖F - G‖ at each recorded time
  bool hypothesis_holds = false;  ///< both ratios <= 1e-3
  std::string note;
};

/// Evolves both data and records the critical-norm gap. Throws GateRefusal
/// when either datum fails theorem1_gate.
StabilityReport stability_experiment(const SpectralField& u0, const SpectralField& v0,
                                     std::span<const TimedField> force_u,
                                     std::span<const TimedField> force_v, const SolverConfig& config);

/// Critical-velocity gap series between two trajectories recorded on the
/// same schedule.
std::vector<double> gap_series(const Trajectory& a, const Trajectory& b, const FBParams& velocity,
                               const LPFrame& frame);

}  // namespace fnsc
