#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fnsc/data_gen.hpp"
#include "fnsc/lp_frame.hpp"
#include "fnsc/symbols.hpp"

namespace fnsc {

/// P̂(ξ)·iξ·(u⊗v)^(ξ), dealiased: the projected transport source whose
/// Duhamel integral is the bilinear term.
SpectralField projected_transport(const SpectralField& u, const SpectralField& v);

/// One ETD1 step of the bilinear term over [0, h] with the integrand frozen
/// at the left endpoint, -W(h)·P̂·iξ·(u⊗v)^. The leading minus sign is part
/// of B, so the mild equation reads u = S u₀ + B(u, u) + F̃.
SpectralField bilinear_step(const SpectralField& u, const SpectralField& v, double h,
                            const PhysicalParams& params);

/// Per-thread scratch for repeated bilinear steps at a fixed (grid, h,
/// params): the Duhamel weights are tabulated once.
class BilinearWorkspace {
 public:
  BilinearWorkspace(const FrequencyGrid& grid, double h, const PhysicalParams& params);

  const FrequencyGrid& grid() const { return grid_; }
  double step() const { return h_; }

  SpectralField apply(const SpectralField& u, const SpectralField& v) const;
  /// -W(h) applied to an already projected source.
  SpectralField integrate(const SpectralField& source) const;

 private:
  FrequencyGrid grid_;
  double h_;
  SymbolTable weights_;
};

/// Forcing samples F(t_k), held constant between samples.
using ForceSeries = FieldSeries;

/// F at time t: the latest sample with time <= t. Throws
/// std::invalid_argument if the series is empty or starts after t.
const SpectralField& force_at(std::span<const TimedField> series, double t);

/// ETD1 accumulation of F̃(t) = ∫₀ᵗ S(t-τ)P̂F(τ)dτ with step h (the last step
/// is shortened to land on t). Throws std::invalid_argument when the series
/// is empty or does not start at 0.
SpectralField forcing_term(std::span<const TimedField> series, double t, double h,
                           const PhysicalParams& params);

/// T_f(g) = Σ_j S_{j-1} f · Δ_j g, products through physical space without
/// dealiasing.
SpectralScalar paraproduct_T(const SpectralScalar& f, const SpectralScalar& g, const LPFrame& frame);

/// R(f, g) = Σ_j Δ_j f · Δ̃_j g with Δ̃_j = Δ_{j-1} + Δ_j + Δ_{j+1}.
SpectralScalar paraproduct_R(const SpectralScalar& f, const SpectralScalar& g, const LPFrame& frame);

/// max_x |fg - T_f g - T_g f - R(f, g)| / max_x |fg| in physical space
/// (absolute when fg vanishes).
double verify_paraproduct_identity(const SpectralScalar& f, const SpectralScalar& g,
                                   const LPFrame& frame);

/// Time grid used to sample B(u, v)(t) = -W(t)·P̂iξ·(u⊗v)^ for
/// time-independent u, v. The t → ∞ limit (the stationary kernel) is always
/// included.
struct ProductSampling {
  double t_min = 1e-3;
  double t_max = 1e3;
  std::size_t samples = 32;
};

/// ‖B(u, v)‖ over the sampled times in the 𝓛^∞(FB) norm at `velocity`.
double bilinear_time_norm(const SpectralField& u, const SpectralField& v,
                          const PhysicalParams& params, const FBParams& velocity,
                          const LPFrame& frame, const ProductSampling& sampling = {});

/// Pairs used to calibrate the bilinear constant.
struct ProductCorpus {
  std::size_t random_pairs = 24;      ///< broadband random pairs
  std::size_t planar_pairs = 8;       ///< random pairs with wavevectors orthogonal to the axis
  std::size_t single_mode_pairs = 8;  ///< pairs of plane waves at random modes
  /// Every ordered pair of distinct plane waves with max_i |k_i| <= this
  /// band (0 disables the sweep).
  int plane_wave_band = 1;
  std::vector<int> bands{1, 2, 4};    ///< band limits max_i |k_i|, cycled over random pairs

  std::size_t plane_wave_pairs() const;
  std::size_t size() const;
};

struct ProductConstantReport {
  double constant = 0.0;      ///< max ratio over the corpus
  double mean_ratio = 0.0;
  std::size_t pairs = 0;
  std::vector<double> ratios;
};

/// Empirical K: max over a seeded corpus of ‖B(u,v)‖ / (‖u‖‖v‖) with the
/// time-sampled norm above.
ProductConstantReport measure_product_constant(const FrequencyGrid& grid, std::uint64_t corpus_seed,
                                               const PhysicalParams& params,
                                               const FBParams& velocity,
                                               const ProductCorpus& corpus = {},
                                               const ProductSampling& sampling = {});

/// Empirical forcing constant C: max over the first fields of the same
/// corpus of ν‖W(t)P̂F‖ / ‖F‖ (velocity norm over the sampled times, kernel
/// included, against the force index).
ProductConstantReport measure_forcing_constant(const FrequencyGrid& grid, std::uint64_t corpus_seed,
                                               const PhysicalParams& params,
                                               const FBParams& velocity, const FBParams& force,
                                               const ProductCorpus& corpus = {},
                                               const ProductSampling& sampling = {});

/// Empirical semigroup constant: max over the first fields of the corpus of
/// sup_t ‖S(t)u‖ / ‖u‖, shell-first over t = 0 and the sampled times.
ProductConstantReport measure_semigroup_constant(const FrequencyGrid& grid, std::uint64_t corpus_seed,
                                                 const PhysicalParams& params, const FBParams& velocity,
                                                 const ProductCorpus& corpus = {},
                                                 const ProductSampling& sampling = {});

/// Velocity pair number `k` of the corpus.
std::pair<SpectralField, SpectralField> corpus_pair(const FrequencyGrid& grid, std::uint64_t seed,
                                                    std::size_t k, const ProductCorpus& corpus);

}  // namespace fnsc
