#pragma once

/// \file snapshot.hpp
/// Field snapshot file format: a 16-byte header (12-byte magic
/// "KSLAB-FIELDS" plus a little-endian uint32 version), a little-endian
/// uint64 cell count, then the u and v cell values as little-endian
/// 8-byte floats. Round-trips are bit exact.

#include "kslab/grid.hpp"

#include <string>

namespace kslab {

inline constexpr char kSnapshotMagic[13] = "KSLAB-FIELDS";
inline constexpr unsigned kSnapshotVersion = 1;

struct Snapshot {
  Vector u;
  Vector v;
};

void write_snapshot(const std::string& path, const Vector& u, const Vector& v);
Snapshot read_snapshot(const std::string& path);

} // namespace kslab
