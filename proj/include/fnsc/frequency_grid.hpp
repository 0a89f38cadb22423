#pragma once

#include <array>
#include <cstddef>

#include "fnsc/types.hpp"

namespace fnsc {

/// Discrete Fourier lattice of the periodic box [0, L)^3 with n points per
/// side. Flat indices are row-major in (k1, k2, k3) with k3 fastest; signed
/// modes live in [-n/2, n/2).
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::size_t n = 32, double period = kTwoPi,
                         double dealias_fraction = 2.0 / 3.0);

  std::size_t n() const { return n_; }
  double period() const { return period_; }
  double dealias_fraction() const { return dealias_fraction_; }
  std::size_t size() const { return n_ * n_ * n_; }

  /// 2π/L, the lattice spacing in frequency space.
  double base_wavenumber() const { return kTwoPi / period_; }
  /// Volume element dξ carried by one lattice site, (2π/L)^3.
  double quadrature_weight() const;

  int signed_mode(std::size_t k) const {
    return k < n_ / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n_);
  }
  std::array<int, 3> signed_modes(std::size_t flat) const;
  /// Flat index of a signed (or unsigned) mode triple, wrapped modulo n.
  std::size_t flat_index(int k1, int k2, int k3) const;
  /// Flat index of -k.
  std::size_t negated(std::size_t flat) const;

  Vec3 wavevector(std::size_t flat) const;
  double wavenumber(std::size_t flat) const { return wavevector(flat).norm(); }
  /// Largest |ξ| on the lattice.
  double max_wavenumber() const;

  /// True where max_i |k_i| <= dealias_fraction * n / 2.
  bool in_dealias_band(std::size_t flat) const;
  /// True on the unresolved planes k_i = -n/2, which have no partner mode.
  bool is_nyquist(std::size_t flat) const;

  /// Binary operations need matching resolution and period.
  bool compatible(const FrequencyGrid& other) const {
    return n_ == other.n_ && period_ == other.period_;
  }
  bool operator==(const FrequencyGrid& other) const = default;

 private:
  std::size_t n_;
  double period_;
  double dealias_fraction_;
};

/// Throws std::invalid_argument when the grids are not composable.
void require_compatible(const FrequencyGrid& a, const FrequencyGrid& b);

}  // namespace fnsc
