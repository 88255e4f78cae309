#include "kslab/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kslab {

// The format is little-endian by definition; this code targets
// little-endian hosts and memcpys scalars directly.
static_assert(sizeof(double) == 8);

void write_snapshot(const std::string& path, const Vector& u, const Vector& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("write_snapshot: u and v sizes differ");
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_snapshot: cannot open " + path);

  f.write(kSnapshotMagic, 12);
  const uint32_t version = kSnapshotVersion;
  f.write(reinterpret_cast<const char*>(&version), 4);
  const uint64_t count = static_cast<uint64_t>(u.size());
  f.write(reinterpret_cast<const char*>(&count), 8);
  f.write(reinterpret_cast<const char*>(u.data()), static_cast<std::streamsize>(count * 8));
  f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(count * 8));
  if (!f) throw std::runtime_error("write_snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_snapshot: cannot open " + path);

  char magic[12];
  f.read(magic, 12);
  if (!f || std::memcmp(magic, kSnapshotMagic, 12) != 0) {
    throw std::runtime_error("read_snapshot: bad magic in " + path);
  }
  uint32_t version = 0;
  f.read(reinterpret_cast<char*>(&version), 4);
  if (!f || version != kSnapshotVersion) {
    throw std::runtime_error("read_snapshot: unsupported version in " + path);
  }
  uint64_t count = 0;
  f.read(reinterpret_cast<char*>(&count), 8);
  if (!f || count == 0 || count > (1ull << 32)) {
    throw std::runtime_error("read_snapshot: implausible cell count in " + path);
  }
  Snapshot s;
  s.u.resize(static_cast<Eigen::Index>(count));
  s.v.resize(static_cast<Eigen::Index>(count));
  f.read(reinterpret_cast<char*>(s.u.data()), static_cast<std::streamsize>(count * 8));
  f.read(reinterpret_cast<char*>(s.v.data()), static_cast<std::streamsize>(count * 8));
  if (!f) throw std::runtime_error("read_snapshot: truncated file " + path);
  return s;
}

} // namespace kslab
