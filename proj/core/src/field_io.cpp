#include "expphi2/field_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace expphi2 {

namespace {

constexpr std::array<char, 8> kMagic = {'E', 'X', 'P', 'P', 'H', 'I', '2', '\0'};

void write_u32_le(std::ostream& os, std::uint32_t v) {
  std::array<unsigned char, 4> b = {
      static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
      static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t read_u32_le(std::istream& is) {
  std::array<unsigned char, 4> b{};
  is.read(reinterpret_cast<char*>(b.data()), 4);
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
         (std::uint32_t(b[3]) << 24);
}

std::ifstream open_and_check(const std::string& path, std::uint32_t* m, std::uint32_t* kind) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigInvalid("cannot open snapshot '" + path + "'");
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ConfigInvalid("bad magic in snapshot '" + path + "'");
  }
  *m = read_u32_le(is);
  *kind = read_u32_le(is);
  if (!is) throw ConfigInvalid("truncated snapshot header in '" + path + "'");
  return is;
}

}  // namespace

void write_snapshot(const std::string& path, const TorusField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigInvalid("cannot write snapshot '" + path + "'");
  os.write(kMagic.data(), kMagic.size());
  write_u32_le(os, static_cast<std::uint32_t>(f.grid.m()));
  write_u32_le(os, static_cast<std::uint32_t>(SnapshotKind::physical));
  os.write(reinterpret_cast<const char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

void write_snapshot(const std::string& path, const SpectralCoeffs& c) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigInvalid("cannot write snapshot '" + path + "'");
  os.write(kMagic.data(), kMagic.size());
  write_u32_le(os, static_cast<std::uint32_t>(c.grid.m()));
  write_u32_le(os, static_cast<std::uint32_t>(SnapshotKind::spectral));
  os.write(reinterpret_cast<const char*>(c.coeffs.data()),
           static_cast<std::streamsize>(c.coeffs.size() * 2 * sizeof(double)));
}

SnapshotKind peek_snapshot_kind(const std::string& path) {
  std::uint32_t m = 0, kind = 0;
  open_and_check(path, &m, &kind);
  return static_cast<SnapshotKind>(kind);
}

TorusField read_field_snapshot(const std::string& path) {
  std::uint32_t m = 0, kind = 0;
  std::ifstream is = open_and_check(path, &m, &kind);
  if (kind != static_cast<std::uint32_t>(SnapshotKind::physical)) {
    throw ConfigInvalid("snapshot '" + path + "' is not a physical field");
  }
  TorusField f(TorusGrid(static_cast<int>(m)));
  is.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!is) throw ConfigInvalid("truncated snapshot payload in '" + path + "'");
  return f;
}

SpectralCoeffs read_spectral_snapshot(const std::string& path) {
  std::uint32_t m = 0, kind = 0;
  std::ifstream is = open_and_check(path, &m, &kind);
  if (kind != static_cast<std::uint32_t>(SnapshotKind::spectral)) {
    throw ConfigInvalid("snapshot '" + path + "' is not spectral");
  }
  SpectralCoeffs c(TorusGrid(static_cast<int>(m)));
  is.read(reinterpret_cast<char*>(c.coeffs.data()),
          static_cast<std::streamsize>(c.coeffs.size() * 2 * sizeof(double)));
  if (!is) throw ConfigInvalid("truncated snapshot payload in '" + path + "'");
  return c;
}

}  // namespace expphi2
