#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "fnsc/lp_frame.hpp"
#include "fnsc/spectral_field.hpp"

namespace fnsc {

/// Counter-based uniform variate in [0, 1): splitmix64 of (seed, stream)
/// mapped through the top 53 bits. Streams are keyed by lattice mode, so the
/// same seed describes the same continuum field on every grid that resolves
/// its band.
double keyed_uniform(std::uint64_t seed, std::uint64_t stream);

/// Stream key of a signed mode triple and a draw slot.
std::uint64_t mode_stream(int k1, int k2, int k3, int slot);

/// Which modes a random field may occupy.
struct BandSpec {
  int min_mode = 1;      ///< smallest admissible max_i |k_i|
  int max_mode = 4;      ///< largest admissible max_i |k_i|
  bool planar = false;   ///< restrict to k₃ = 0 (wavevectors orthogonal to the axis)
  double slope = 0.0;    ///< amplitude profile |ξ|^{-slope}
  bool off_axis = false; ///< exclude k₃ = 0
};

/// Divergence-free, mean-free, Hermitian random field on the modes selected
/// by `band`. Throws std::invalid_argument if the band exceeds the lattice's
/// resolved range or asks for both planar and off-axis modes.
SpectralField random_band_field(const FrequencyGrid& grid, std::uint64_t seed, const BandSpec& band);

/// Real divergence-free plane wave at signed mode k: direction `a` is
/// projected orthogonal to k and the coefficient pair is a/2 at ±k.
SpectralField single_mode_field(const FrequencyGrid& grid, std::array<int, 3> k, const Vec3& a);

/// u = (sin x cos y cos z, -cos x sin y cos z, 0) with x scaled by 2π/L.
SpectralField taylor_green_field(const FrequencyGrid& grid);

/// Random-phase field with amplitude |ξ|^{-degree} over the dealias band.
SpectralField homogeneous_like_field(const FrequencyGrid& grid, std::uint64_t seed, double degree);

/// Rescales a nonzero field so its FB norm equals `amplitude`. Throws
/// std::invalid_argument for the zero field.
SpectralField normalized(SpectralField field, double amplitude, const FBParams& params,
                         const LPFrame& frame);

enum class DataKind { taylor_green, random_band, single_mode, homogeneous_like };

DataKind parse_data_kind(const std::string& name);
std::string to_string(DataKind kind);

struct DataRequest {
  DataKind kind = DataKind::random_band;
  std::uint64_t seed = 1;
  double amplitude = 1.0;       ///< target FB norm
  BandSpec band{};
  std::array<int, 3> mode{1, 0, 0};
  double degree = 2.0;
};

/// Builds the requested field and normalizes it under `params`.
SpectralField generate_data(const DataRequest& request, const FrequencyGrid& grid,
                            const FBParams& params, const LPFrame& frame);

}  // namespace fnsc
