#include "fnsc/data_gen.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fnsc {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// First nonzero component positive: picks one member of each ± pair
// independently of the resolution.
bool canonical(const std::array<int, 3>& k) {
  for (int c : k)
    if (c != 0) return c > 0;
  return false;
}

int max_abs(const std::array<int, 3>& k) {
  return std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
}

void set_pair(SpectralField& f, std::size_t idx, const CVec3& v) {
  const std::size_t neg = f.grid().negated(idx);
  for (std::size_t c = 0; c < 3; ++c) {
    f.at(c, idx) = v[static_cast<Eigen::Index>(c)];
    f.at(c, neg) = std::conj(v[static_cast<Eigen::Index>(c)]);
  }
}

CVec3 transverse(const Vec3& xi, const CVec3& v) {
  const Vec3 e = xi / xi.norm();
  const Complex dot = e[0] * v[0] + e[1] * v[1] + e[2] * v[2];
  return v - dot * e.cast<Complex>();
}

}  // namespace

double keyed_uniform(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t x = splitmix64(splitmix64(seed) ^ stream);
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

std::uint64_t mode_stream(int k1, int k2, int k3, int slot) {
  auto u = [](int k) { return static_cast<std::uint64_t>(static_cast<std::uint32_t>(k + 32768)) & 0xffffULL; };
  return (u(k1) << 48) | (u(k2) << 32) | (u(k3) << 16) | static_cast<std::uint64_t>(slot & 0xffff);
}

SpectralField random_band_field(const FrequencyGrid& grid, std::uint64_t seed, const BandSpec& band) {
  const int half = static_cast<int>(grid.n() / 2);
  if (band.min_mode < 1 || band.max_mode < band.min_mode || band.max_mode >= half)
    throw std::invalid_argument("random_band_field: band [" + std::to_string(band.min_mode) + ", " +
                                std::to_string(band.max_mode) + "] outside the resolved range");
  if (band.planar && band.off_axis)
    throw std::invalid_argument("random_band_field: planar and off_axis are exclusive");
  SpectralField out(grid);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const auto k = grid.signed_modes(i);
    if (!canonical(k) || grid.is_nyquist(i)) continue;
    const int m = max_abs(k);
    if (m < band.min_mode || m > band.max_mode) continue;
    if (band.planar && k[2] != 0) continue;
    if (band.off_axis && k[2] == 0) continue;
    CVec3 v;
    for (int c = 0; c < 3; ++c) {
      const double re = 2.0 * keyed_uniform(seed, mode_stream(k[0], k[1], k[2], 2 * c)) - 1.0;
      const double im = 2.0 * keyed_uniform(seed, mode_stream(k[0], k[1], k[2], 2 * c + 1)) - 1.0;
      v[c] = Complex{re, im};
    }
    const Vec3 xi = grid.wavevector(i);
    set_pair(out, i, std::pow(xi.norm(), -band.slope) * transverse(xi, v));
  }
  return out;
}

SpectralField single_mode_field(const FrequencyGrid& grid, std::array<int, 3> k, const Vec3& a) {
  const int half = static_cast<int>(grid.n() / 2);
  if (k == std::array<int, 3>{0, 0, 0} || max_abs(k) >= half)
    throw std::invalid_argument("single_mode_field: mode outside the resolved range");
  SpectralField out(grid);
  const std::size_t idx = grid.flat_index(k[0], k[1], k[2]);
  const CVec3 v = 0.5 * transverse(grid.wavevector(idx), a.cast<Complex>());
  if (v.norm() == 0.0) throw std::invalid_argument("single_mode_field: direction parallel to mode");
  set_pair(out, idx, v);
  return out;
}

SpectralField taylor_green_field(const FrequencyGrid& grid) {
  const std::size_t n = grid.n();
  const std::size_t sites = grid.size();
  const double h = grid.period() / static_cast<double>(n);
  const double k0 = grid.base_wavenumber();
  std::vector<double> phys(3 * sites);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const double x = k0 * h * static_cast<double>(a);
        const double y = k0 * h * static_cast<double>(b);
        const double z = k0 * h * static_cast<double>(c);
        const std::size_t i = (a * n + b) * n + c;
        phys[i] = std::sin(x) * std::cos(y) * std::cos(z);
        phys[sites + i] = -std::cos(x) * std::sin(y) * std::cos(z);
      }
  auto out = forward_transform<3>(phys, grid, MeanMode::project);
  symmetrize(out);
  return out;
}

SpectralField homogeneous_like_field(const FrequencyGrid& grid, std::uint64_t seed, double degree) {
  BandSpec band;
  band.min_mode = 1;
  band.max_mode = static_cast<int>(std::floor(grid.dealias_fraction() * static_cast<double>(grid.n()) / 2.0));
  band.max_mode = std::min(band.max_mode, static_cast<int>(grid.n() / 2) - 1);
  band.slope = degree;
  return random_band_field(grid, seed, band);
}

SpectralField normalized(SpectralField field, double amplitude, const FBParams& params,
                         const LPFrame& frame) {
  const double norm = fb_norm(field, params, frame);
  if (norm == 0.0) throw std::invalid_argument("normalized: zero field has no direction");
  field *= amplitude / norm;
  return field;
}

DataKind parse_data_kind(const std::string& name) {
  if (name == "taylor_green") return DataKind::taylor_green;
  if (name == "random_band") return DataKind::random_band;
  if (name == "single_mode") return DataKind::single_mode;
  if (name == "homogeneous_like") return DataKind::homogeneous_like;
  throw std::invalid_argument("unknown data kind '" + name + "'");
}

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::taylor_green: return "taylor_green";
    case DataKind::random_band: return "random_band";
    case DataKind::single_mode: return "single_mode";
    case DataKind::homogeneous_like: return "homogeneous_like";
  }
  return "unknown";
}

SpectralField generate_data(const DataRequest& request, const FrequencyGrid& grid,
                            const FBParams& params, const LPFrame& frame) {
  SpectralField f(grid);
  switch (request.kind) {
    case DataKind::taylor_green: f = taylor_green_field(grid); break;
    case DataKind::random_band: f = random_band_field(grid, request.seed, request.band); break;
    case DataKind::single_mode: {
      // A direction generic enough never to be parallel to a lattice mode.
      const Vec3 a(0.48, -0.81, 0.33);
      f = single_mode_field(grid, request.mode, a);
      break;
    }
    case DataKind::homogeneous_like: f = homogeneous_like_field(grid, request.seed, request.degree); break;
  }
  if (request.amplitude == 0.0) return SpectralField(grid);
  return normalized(std::move(f), request.amplitude, params, frame);
}

}  // namespace fnsc
