#include "fnsc/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace fnsc {
namespace {

template <class T>
void put_le(std::vector<char>& buf, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b) buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
}

template <class T>
T get_le(const char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b)
    bits |= static_cast<U>(static_cast<unsigned char>(p[b])) << (8 * b);
  return std::bit_cast<T>(bits);
}

constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 5 * 8;

}  // namespace

void write_snapshot(const std::filesystem::path& path, const SpectralField& field,
                    const SnapshotHeader& header) {
  const auto& g = field.grid();
  std::vector<char> buf;
  buf.reserve(kHeaderBytes + field.coeffs().size() * 16);
  buf.insert(buf.end(), std::begin(kSnapshotMagic), std::end(kSnapshotMagic));
  put_le(buf, kSnapshotVersion);
  put_le(buf, static_cast<std::uint32_t>(g.n()));
  put_le(buf, g.period());
  put_le(buf, header.nu);
  put_le(buf, header.alpha);
  put_le(buf, header.omega);
  put_le(buf, field.time_tag());
  for (const auto& z : field.coeffs()) {
    put_le(buf, z.real());
    put_le(buf, z.imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot open snapshot for writing: " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw SnapshotError("failed writing snapshot: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot: " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeaderBytes) throw SnapshotError("snapshot truncated: " + path.string());
  if (std::memcmp(buf.data(), kSnapshotMagic, 4) != 0) throw SnapshotError("bad snapshot magic");
  const char* p = buf.data() + 4;
  const auto version = get_le<std::uint32_t>(p);
  if (version != kSnapshotVersion) throw SnapshotError("unsupported snapshot version");
  const auto n = get_le<std::uint32_t>(p + 4);
  const double period = get_le<double>(p + 8);
  SnapshotHeader header{get_le<double>(p + 16), get_le<double>(p + 24), get_le<double>(p + 32)};
  const double time_tag = get_le<double>(p + 40);

  const FrequencyGrid grid(n, period);
  const std::size_t count = 3 * grid.size();
  if (buf.size() != kHeaderBytes + 16 * count) throw SnapshotError("snapshot size does not match header");
  std::vector<Complex> coeffs(count);
  const char* data = buf.data() + kHeaderBytes;
  for (std::size_t i = 0; i < count; ++i)
    coeffs[i] = Complex{get_le<double>(data + 16 * i), get_le<double>(data + 16 * i + 8)};
  return {SpectralField(grid, std::move(coeffs), time_tag), header};
}

}  // namespace fnsc
