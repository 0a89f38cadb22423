#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>

#include "fnsc/spectral_field.hpp"

namespace fnsc {

/// Physical parameters stamped into a snapshot header.
struct SnapshotHeader {
  double nu = 1.0;
  double alpha = 1.0;
  double omega = 0.0;
};

struct Snapshot {
  SpectralField field;
  SnapshotHeader header;
};

inline constexpr char kSnapshotMagic[4] = {'F', 'N', 'S', 'C'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary layout, all little-endian: "FNSC", u32 version, u32 n, f64 period,
/// f64 nu, f64 alpha, f64 omega, f64 time_tag, then 3·n³ (re, im) f64 pairs,
/// component-major, frequency index row-major with k3 fastest.
void write_snapshot(const std::filesystem::path& path, const SpectralField& field,
                    const SnapshotHeader& header);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace fnsc
