#include "fnsc/frequency_grid.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fnsc {

FrequencyGrid::FrequencyGrid(std::size_t n, double period, double dealias_fraction)
    : n_(n), period_(period), dealias_fraction_(dealias_fraction) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("FrequencyGrid: n_per_dim must be even and >= 2");
  if (!(period > 0.0) || !std::isfinite(period)) throw std::invalid_argument("FrequencyGrid: period must be positive");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw std::invalid_argument("FrequencyGrid: dealias_fraction must lie in (0, 1]");
}

double FrequencyGrid::quadrature_weight() const {
  const double k0 = base_wavenumber();
  return k0 * k0 * k0;
}

std::array<int, 3> FrequencyGrid::signed_modes(std::size_t flat) const {
  const std::size_t k3 = flat % n_;
  const std::size_t k2 = (flat / n_) % n_;
  const std::size_t k1 = flat / (n_ * n_);
  return {signed_mode(k1), signed_mode(k2), signed_mode(k3)};
}

std::size_t FrequencyGrid::flat_index(int k1, int k2, int k3) const {
  const int n = static_cast<int>(n_);
  auto wrap = [n](int k) { return static_cast<std::size_t>(((k % n) + n) % n); };
  return (wrap(k1) * n_ + wrap(k2)) * n_ + wrap(k3);
}

std::size_t FrequencyGrid::negated(std::size_t flat) const {
  const auto k = signed_modes(flat);
  return flat_index(-k[0], -k[1], -k[2]);
}

Vec3 FrequencyGrid::wavevector(std::size_t flat) const {
  const auto k = signed_modes(flat);
  const double k0 = base_wavenumber();
  return {k0 * k[0], k0 * k[1], k0 * k[2]};
}

double FrequencyGrid::max_wavenumber() const {
  return std::sqrt(3.0) * base_wavenumber() * static_cast<double>(n_ / 2);
}

bool FrequencyGrid::in_dealias_band(std::size_t flat) const {
  const auto k = signed_modes(flat);
  const double cutoff = dealias_fraction_ * static_cast<double>(n_) / 2.0;
  return std::abs(k[0]) <= cutoff && std::abs(k[1]) <= cutoff && std::abs(k[2]) <= cutoff;
}

bool FrequencyGrid::is_nyquist(std::size_t flat) const {
  const int nyq = -static_cast<int>(n_ / 2);
  const auto k = signed_modes(flat);
  return k[0] == nyq || k[1] == nyq || k[2] == nyq;
}

void require_compatible(const FrequencyGrid& a, const FrequencyGrid& b) {
  if (!a.compatible(b)) throw std::invalid_argument("frequency grids differ in resolution or period");
}

}  // namespace fnsc
