#pragma once

#include <string>

#include "expphi2/grid.hpp"

namespace expphi2 {

// Shared snapshot format: magic "EXPPHI2\0", little-endian u32 grid size m,
// u32 payload kind (0 = physical real f64 row-major, 1 = spectral complex
// interleaved f64), then the payload. Readers reject bad magic.

void write_snapshot(const std::string& path, const TorusField& f);
void write_snapshot(const std::string& path, const SpectralCoeffs& c);

enum class SnapshotKind : std::uint32_t { physical = 0, spectral = 1 };

SnapshotKind peek_snapshot_kind(const std::string& path);
TorusField read_field_snapshot(const std::string& path);
SpectralCoeffs read_spectral_snapshot(const std::string& path);

}  // namespace expphi2
