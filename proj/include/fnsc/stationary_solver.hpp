#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fnsc/mild_solver.hpp"

namespace fnsc {

struct StationaryResult {
  SpectralField u;
  double residual = 0.0;  ///< critical velocity norm of u - Kern·P̂[F̂ - iξ·(u⊗u)^]
  int iterations = 0;
  bool converged = false;
  bool gate_held = false;
  std::vector<double> residual_history;
  std::string warning;
};

/// Picard iteration u^{n+1} = Kern·P̂·[F̂ - iξ·(uⁿ⊗uⁿ)^] from `start`
/// (default the linear response Kern·P̂F̂). With `nonlinear` false the
/// quadratic term is dropped and one iteration returns the linear response.
StationaryResult stationary_picard(const SpectralField& force, const SolverConfig& config,
                                   std::optional<SpectralField> start = std::nullopt,
                                   bool nonlinear = true);

/// max over t of ‖u - S(t)u - W(t)P̂[F̂ - iξ·(u⊗u)^]‖ at the critical
/// velocity index, with the exact Duhamel weights W(t).
double verify_stationary_equivalence(const SpectralField& u, const SpectralField& force,
                                     std::span<const double> t_samples, const PhysicalParams& params,
                                     const FBParams& velocity);

struct UniquenessReport {
  std::vector<StationaryResult> runs;
  double spread = 0.0;  ///< max pairwise velocity-norm distance
  bool all_converged = false;
};

/// Solves from n_starts random initial guesses with norms spread over
/// (0, 2ε); the first start is the default one.
UniquenessReport uniqueness_probe(const SpectralField& force, const SolverConfig& config,
                                  std::size_t n_starts, std::uint64_t seed = 1);

struct RegionMasks {
  SiteMask a;  ///< |ξ₃| > δ, δ < |ξ| <= 1/δ
  SiteMask b;  ///< |ξ₃| > δ, |ξ| > 1/δ
  SiteMask c;  ///< |ξ₃| <= δ
};

/// Disjoint masks covering every nonzero site. Throws std::invalid_argument
/// for δ <= 0.
RegionMasks region_decomposition(const FrequencyGrid& grid, double delta);

struct OmegaScanOptions {
  double omega_min = 1.0;
  double omega_max = 1048576.0;  ///< 2^20
  double factor = 2.0;
  int tail_shells = 2;  ///< J in the q = ∞ tail condition sup_{|j|>J}
};

struct OmegaScanResult {
  std::vector<double> omegas;
  std::vector<double> x_norms;
  std::vector<double> region_a;
  std::vector<double> region_b;
  std::vector<double> region_c;
  std::optional<double> omega_threshold;
  std::optional<std::size_t> threshold_index;
  double delta = 0.0;
  bool delta_found = false;  ///< the B∪C bound reached ε/3
  double outer_bound = 0.0;  ///< (2/ν)‖|ξ|^s F̂ 1_{B∪C}‖ at the chosen δ
  std::optional<double> analytic_omega0;
  std::optional<double> tail_value;  ///< q = ∞ only, at the last scanned Ω
  /// q = p, or q = ∞ with the tail condition below ε/3; other q carry no
  /// threshold guarantee.
  bool hypothesis_holds = false;
  double epsilon = 0.0;

  std::string to_csv() const;
};

/// Scans Ω geometrically and reports x_norm with its A/B/C parts, the first
/// Ω with x_norm <= ε, δ from the B∪C bisection and the closed-form Ω₀ from
/// the A_δ bounds.
OmegaScanResult estimate_omega_threshold(const SpectralField& force, const PhysicalParams& params,
                                         const FBParams& force_index, double epsilon,
                                         const OmegaScanOptions& options = {});

struct ConvergenceReport {
  StationaryResult stationary;
  NormSeries series;  ///< v's norms with gap = ‖v(t) - u_∞‖
  double initial_gap = 0.0;
  double final_gap = 0.0;
  bool converged = false;         ///< final_gap <= 1e-3 · initial_gap
  double linear_gap_ratio = 0.0;  ///< ‖S(T)(v0 - u_∞)‖ / ‖v0 - u_∞‖
  double force_gap_ratio = 0.0;   ///< ‖G(T) - F‖ / max_t ‖G(t) - F‖
  bool hypothesis_holds = false;
};

/// Solves the stationary problem, then evolves v from v0 under G and records
/// the critical-norm distance to u_∞. Throws GateRefusal when either the
/// stationary solve or the evolution gate fails.
ConvergenceReport converge_to_stationary_experiment(const SpectralField& v0,
                                                    std::span<const TimedField> g_series,
                                                    const SpectralField& force,
                                                    const SolverConfig& config);

/// ν·time-sampled forcing bound constant on the default corpus, the C in the
/// stationary gate ‖F‖ < εν/C.
double measured_forcing_constant(const FrequencyGrid& grid, const SolverConfig& config,
                                 std::uint64_t corpus_seed = 11);

}  // namespace fnsc
