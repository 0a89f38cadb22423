#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fnsc/lp_frame.hpp"
#include "fnsc/parallel.hpp"
#include "fnsc/spectral_field.hpp"

namespace fnsc {

/// Viscosity ν, fractional exponent α and rotation rate Ω.
struct PhysicalParams {
  double nu = 1.0;
  double alpha = 0.75;
  double omega = 0.0;

  /// Upper end of the admissible α interval for integrability p.
  static double alpha_upper(double p) { return (5.0 - (std::isinf(p) ? 0.0 : 3.0 / p)) / 4.0; }

  /// Throws std::invalid_argument unless ν > 0 and 1/2 < α < (5 - 3/p)/4.
  void validate(double p) const;

  /// Validated construction.
  static PhysicalParams checked(double nu, double alpha, double omega, double p);
};

/// A symbol of the form a·I + b·R(ξ), the shape shared by the semigroup, its
/// time integrals and the stationary kernel.
struct SymbolPair {
  double identity = 0.0;
  double rotation = 0.0;

  /// a·v + b·(v × ξ̂) for a unit vector ξ̂.
  CVec3 apply(const Vec3& unit_xi, const CVec3& v) const {
    // Written out: Eigen's cross() conjugates the result for complex scalars.
    const CVec3 vxn(v[1] * unit_xi[2] - v[2] * unit_xi[1], v[2] * unit_xi[0] - v[0] * unit_xi[2],
                    v[0] * unit_xi[1] - v[1] * unit_xi[0]);
    return identity * v + rotation * vxn;
  }
  Mat3 matrix(const Vec3& xi) const;
};

/// R(ξ)v = (v × ξ)/|ξ|; zero matrix at ξ = 0.
Mat3 rotation_matrix(const Vec3& xi);
/// I - ξξᵀ/|ξ|²; zero matrix at ξ = 0.
Mat3 leray_symbol(const Vec3& xi);

/// ν|ξ|^{2α}.
inline double dissipation_rate(const Vec3& xi, const PhysicalParams& params) {
  return params.nu * std::pow(xi.squaredNorm(), params.alpha);
}
/// Ωξ₃/|ξ|.
inline double rotation_rate(const Vec3& xi, const PhysicalParams& params) {
  return params.omega * xi[2] / xi.norm();
}

/// e^{-λt}cos(bt), e^{-λt}sin(bt). Throws std::invalid_argument for t < 0.
SymbolPair semigroup_coefficients(const Vec3& xi, double t, const PhysicalParams& params);
Mat3 semigroup_symbol(const Vec3& xi, double t, const PhysicalParams& params);

/// ∫₀^h e^{-λs}cos(bs) ds and ∫₀^h e^{-λs}sin(bs) ds in closed form. Throws
/// std::invalid_argument for h < 0.
SymbolPair duhamel_coefficients(const Vec3& xi, double h, const PhysicalParams& params);
Mat3 duhamel_weights(const Vec3& xi, double h, const PhysicalParams& params);

/// λ/(λ²+b²) and b/(λ²+b²), the integrals over [0, ∞).
SymbolPair kernel_coefficients(const Vec3& xi, const PhysicalParams& params);
Mat3 stationary_kernel(const Vec3& xi, const PhysicalParams& params);

/// Scalar parts of the X-space weights: w₁ multiplies I, w₂ multiplies R(ξ).
struct XWeights {
  double w1 = 0.0;
  double w2 = 0.0;
};
XWeights x_weight_coefficients(const Vec3& xi, const PhysicalParams& params, double p);
std::pair<Mat3, Mat3> x_norm_weights(const Vec3& xi, const PhysicalParams& params, double p);

/// One SymbolPair per lattice site; sites at ξ = 0 and on Nyquist planes
/// carry the zero symbol.
class SymbolTable {
 public:
  template <class Fn>
  static SymbolTable tabulate(const FrequencyGrid& grid, Fn&& fn) {
    SymbolTable t(grid);
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        if (i == 0 || grid.is_nyquist(i)) continue;
        t.pairs_[i] = fn(grid.wavevector(i));
      }
    });
    return t;
  }

  const FrequencyGrid& grid() const { return grid_; }
  const SymbolPair& operator[](std::size_t i) const { return pairs_[i]; }

  SpectralField apply(const SpectralField& field) const;

 private:
  explicit SymbolTable(const FrequencyGrid& grid) : grid_(grid), pairs_(grid.size()) {}

  FrequencyGrid grid_;
  std::vector<SymbolPair> pairs_;
};

/// Pointwise semigroup action on a field. Throws std::invalid_argument for t < 0.
SpectralField apply_semigroup(const SpectralField& field, double t, const PhysicalParams& params);
/// Pointwise Duhamel weight over [0, h].
SpectralField apply_duhamel(const SpectralField& field, double h, const PhysicalParams& params);
/// Pointwise stationary kernel.
SpectralField apply_kernel(const SpectralField& field, const PhysicalParams& params);

/// Lattice region selector; empty means every site.
using SiteMask = std::vector<std::uint8_t>;

struct XShellNorms {
  std::vector<double> w1;  ///< ‖φ_j w₁ f̂‖_{L^p}, indexed from j_min
  std::vector<double> w2;  ///< ‖φ_j w₂ f̂‖_{L^p}
};
XShellNorms x_shell_norms(const SpectralField& field, const PhysicalParams& params, double p,
                          const LPFrame& frame, const SiteMask& mask = {});

/// ‖(‖φ_j w₁ f̂‖_{L^p})_j‖_{ℓ^q} + ‖(‖φ_j w₂ f̂‖_{L^p})_j‖_{ℓ^q}, restricted to
/// `mask` when one is given.
double x_norm(const SpectralField& field, const PhysicalParams& params, const FBParams& fb,
              const LPFrame& frame, const SiteMask& mask = {});

}  // namespace fnsc
