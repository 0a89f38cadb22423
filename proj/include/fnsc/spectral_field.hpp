#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fnsc/frequency_grid.hpp"
#include "fnsc/types.hpp"

namespace fnsc {

/// Fourier coefficients of a C-component field on a FrequencyGrid.
///
/// Coefficients are stored component-major; inside a component the frequency
/// index is row-major with k3 fastest (the snapshot layout). The scaling is
/// the continuum one, û(ξ) = (2π)^{-3/2} ∫ u(x) e^{-iξ·x} dx evaluated by the
/// rectangle rule, so quadrature_weight · Σ|û|² equals ∫|u|² dx.
template <std::size_t C>
class SpectralArray {
 public:
  static constexpr std::size_t kComponents = C;

  explicit SpectralArray(FrequencyGrid grid = FrequencyGrid{}, double time_tag = 0.0)
      : grid_(grid), coeffs_(C * grid.size()), time_tag_(time_tag) {}

  SpectralArray(FrequencyGrid grid, std::vector<Complex> coeffs, double time_tag = 0.0)
      : grid_(grid), coeffs_(std::move(coeffs)), time_tag_(time_tag) {
    if (coeffs_.size() != C * grid_.size())
      throw std::invalid_argument("SpectralArray: coefficient count does not match grid");
  }

  const FrequencyGrid& grid() const { return grid_; }
  std::size_t sites() const { return grid_.size(); }

  std::span<Complex> component(std::size_t c) { return {coeffs_.data() + c * sites(), sites()}; }
  std::span<const Complex> component(std::size_t c) const {
    return {coeffs_.data() + c * sites(), sites()};
  }
  Complex& at(std::size_t c, std::size_t idx) { return coeffs_[c * sites() + idx]; }
  const Complex& at(std::size_t c, std::size_t idx) const { return coeffs_[c * sites() + idx]; }

  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  double time_tag() const { return time_tag_; }
  void set_time_tag(double t) { time_tag_ = t; }

  /// Euclidean magnitude over components at one lattice site.
  double magnitude(std::size_t idx) const {
    double s = 0.0;
    for (std::size_t c = 0; c < C; ++c) s += std::norm(at(c, idx));
    return std::sqrt(s);
  }
  double max_magnitude() const {
    double m = 0.0;
    for (std::size_t i = 0; i < sites(); ++i) m = std::max(m, magnitude(i));
    return m;
  }
  bool is_zero() const {
    for (const auto& z : coeffs_)
      if (z != Complex{}) return false;
    return true;
  }
  bool all_finite() const {
    for (const auto& z : coeffs_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  SpectralArray& operator+=(const SpectralArray& o) {
    require_compatible(grid_, o.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  SpectralArray& operator-=(const SpectralArray& o) {
    require_compatible(grid_, o.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  SpectralArray& operator*=(double a) {
    for (auto& z : coeffs_) z *= a;
    return *this;
  }
  friend SpectralArray operator+(SpectralArray a, const SpectralArray& b) { return a += b; }
  friend SpectralArray operator-(SpectralArray a, const SpectralArray& b) { return a -= b; }
  friend SpectralArray operator*(double s, SpectralArray a) { return a *= s; }

 private:
  FrequencyGrid grid_;
  std::vector<Complex> coeffs_;
  double time_tag_;
};

using SpectralScalar = SpectralArray<1>;
using SpectralField = SpectralArray<3>;
/// (u⊗v)^ with component index 3*m + k.
using SpectralTensor = SpectralArray<9>;

enum class MeanMode { keep, project };
enum class Dealias { apply, skip };

/// Physical samples (C components of n³ values each, same layout as the
/// coefficients) to Fourier coefficients.
template <std::size_t C>
SpectralArray<C> forward_transform(std::span<const double> physical, const FrequencyGrid& grid,
                                   MeanMode mean = MeanMode::project);

/// Inverse of forward_transform. Throws std::domain_error when the
/// coefficients violate Hermitian symmetry by more than 1e-10 (relative to
/// the largest coefficient), since such a field has no real counterpart.
template <std::size_t C>
std::vector<double> inverse_transform(const SpectralArray<C>& field);

/// max_ξ |û(-ξ) - conj û(ξ)| / max_ξ |û(ξ)| (0 for the zero field).
template <std::size_t C>
double hermitian_defect(const SpectralArray<C>& field);

/// Restores exact Hermitian symmetry by averaging each mode with its partner.
template <std::size_t C>
void symmetrize(SpectralArray<C>& field);

/// Zeroes every mode outside the 2/3 band.
template <std::size_t C>
void apply_dealias_mask(SpectralArray<C>& field);

/// Forces the zero mode to 0.
template <std::size_t C>
void remove_mean(SpectralArray<C>& field);

/// (u⊗v)^ computed pseudospectrally: both fields go to physical space, the
/// nine products are formed pointwise and transformed back. This is the
/// lattice form of the convolution v̂_m * ŵ_k.
SpectralTensor pointwise_tensor_product(const SpectralField& u, const SpectralField& v,
                                        Dealias dealias = Dealias::apply);

/// Product of two scalar fields through physical space.
SpectralScalar pointwise_product(const SpectralScalar& f, const SpectralScalar& g,
                                 Dealias dealias = Dealias::apply);

/// iξ·û(ξ) at every site.
SpectralScalar divergence(const SpectralField& field);

/// Row-contracted tensor divergence, [iξ·T]_k = Σ_m iξ_m T_{mk}.
SpectralField tensor_divergence(const SpectralTensor& tensor);

/// Applies the Leray projector I - ξξᵀ/|ξ|² (zero at ξ = 0).
SpectralField leray_project(const SpectralField& field);

/// max_ξ |ξ·û(ξ)| / max_ξ |û(ξ)|; 0 for the zero field.
double divergence_defect(const SpectralField& field);

/// Kinetic energy ½∫|u|² dx via Parseval.
double energy(const SpectralField& field);

/// L² inner product ∫ u·v dx via Parseval (real part).
double l2_inner(const SpectralField& u, const SpectralField& v);

}  // namespace fnsc
