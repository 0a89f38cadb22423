#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fnsc/spectral_field.hpp"

namespace fnsc {

/// Radial cut-off: 1 for r <= 3/4, 0 for r >= 4/3, smooth in between.
double lp_chi(double r);
/// Dyadic bump φ(r) = χ(r/2) - χ(r), supported in [3/4, 8/3].
double lp_phi(double r);

/// Littlewood–Paley multipliers φ_j(ξ) = φ(2^{-j}|ξ|) sampled on the lattice
/// for the shells j_min..j_max that meet its nonzero frequencies.
class LPFrame {
 public:
  explicit LPFrame(const FrequencyGrid& grid);

  const FrequencyGrid& grid() const { return grid_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int shell_count() const { return j_max_ - j_min_ + 1; }
  bool has_shell(int j) const { return j >= j_min_ && j <= j_max_; }

  /// Multiplier of shell j; throws std::out_of_range outside [j_min, j_max].
  std::span<const double> phi(int j) const;
  /// φ_j at one site, 0 for shells outside the range.
  double phi_at(int j, std::size_t idx) const {
    return has_shell(j) ? phi_[static_cast<std::size_t>(j - j_min_) * grid_.size() + idx] : 0.0;
  }
  /// ψ_j = Σ_{k<=j-1} φ_k at one site.
  double psi_at(int j, std::size_t idx) const;
  /// Σ_{|j'-j|<=1} φ_{j'} at one site.
  double phi_tilde_at(int j, std::size_t idx) const {
    return phi_at(j - 1, idx) + phi_at(j, idx) + phi_at(j + 1, idx);
  }

  /// Nonzero sites whose covering shells are all inside [j_min, j_max], so
  /// the partition of unity holds exactly there.
  bool covered(std::size_t idx) const;

  /// Sites where φ_j is nonzero, in increasing order.
  std::span<const std::uint32_t> support(int j) const;

  /// Copy with shell j scaled by `factor`; used to exercise the partition
  /// check's failure path.
  LPFrame with_scaled_shell(int j, double factor) const;

 private:
  FrequencyGrid grid_;
  int j_min_;
  int j_max_;
  std::vector<double> phi_;  // shell-major, shell_count × n³
  std::vector<std::vector<std::uint32_t>> support_;
};

LPFrame build_frame(const FrequencyGrid& grid);

/// max over covered sites of |Σ_j φ_j(ξ) - 1|.
double partition_defect(const LPFrame& frame);

/// Index triple (s, p, q) of a homogeneous Fourier–Besov norm. p and q may be
/// +infinity.
struct FBParams {
  enum class Critical { none, velocity, force };

  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  Critical critical = Critical::none;
  std::optional<double> alpha;

  /// s = 4 - 2α - 3/p.
  static FBParams critical_velocity(double alpha, double p, double q);
  /// s = 4 - 4α - 3/p.
  static FBParams critical_force(double alpha, double p, double q);

  /// Throws std::invalid_argument unless p > 1, q >= 1 and a critical flag
  /// agrees with (α, p) to 1e-15.
  void validate() const;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (w Σ |x_i|^p)^{1/p}, or max |x_i| for p = ∞; w is the quadrature weight.
double lattice_lp_norm(std::span<const double> magnitudes, double p, double weight);

/// ‖φ_j f̂‖_{L^p} for every shell, indexed from j_min. Vector fields use the
/// Euclidean magnitude at each site.
template <std::size_t C>
std::vector<double> shell_norms(const SpectralArray<C>& field, double p, const LPFrame& frame);

/// Combines shell norms a_j into (Σ 2^{jsq} a_j^q)^{1/q}, or sup_j 2^{js} a_j.
double combine_shells(std::span<const double> shell_values, int j_min, double s, double q);

/// Discrete homogeneous FB^s_{p,q} norm.
template <std::size_t C>
double fb_norm(const SpectralArray<C>& field, const FBParams& params, const LPFrame& frame);

/// Δ_j f: multiplies every coefficient by φ_j.
template <std::size_t C>
SpectralArray<C> delta_j(const SpectralArray<C>& field, int j, const LPFrame& frame);

/// S_j f = Σ_{k<=j-1} Δ_k f.
template <std::size_t C>
SpectralArray<C> low_pass(const SpectralArray<C>& field, int j, const LPFrame& frame);

struct TimedField {
  double time;
  SpectralField field;
};
using FieldSeries = std::vector<TimedField>;

enum class TimeNormMode {
  shell_first,  ///< ℓ^q over shells of sup-in-time, the 𝓛^∞(I; FB) norm
  time_first,   ///< sup in time of the FB norm, the L^∞(I; FB) norm
};

/// Time-dependent norm over sampled times. Throws std::invalid_argument on
/// an empty series.
double time_fb_norm(std::span<const TimedField> series, const FBParams& params,
                    const LPFrame& frame, TimeNormMode mode);

struct BernsteinReport {
  double lhs;
  double rhs;
  double ratio;
};

/// Compares ‖ξ^β f̂‖_{p2} with C·2^{j|β| + 3j(1/p2 - 1/p1)}‖f̂‖_{p1} for f̂
/// supported in |ξ| <= A·2^j. Throws std::invalid_argument if the field
/// leaves that ball or p2 > p1.
BernsteinReport check_bernstein(const SpectralField& field, int j, std::array<int, 3> beta,
                                double p1, double p2, double support_factor, double constant);

struct ScalingReport {
  double lhs;  ///< ‖f(2^k ·)‖ on the nested grid of period L/2^k
  double rhs;  ///< 2^{k(s-3+3/p)} ‖f‖
};

/// Dyadic rescaling law. f(2^k ·) is represented on the nested grid with the
/// same samples and period L·2^{-k}; its lattice is a sub- or super-lattice
/// of the original one, so every mode stays representable.
ScalingReport check_scaling(const SpectralField& field, int k, const FBParams& params,
                            const LPFrame& frame);

}  // namespace fnsc
