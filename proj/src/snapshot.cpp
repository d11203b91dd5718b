#include "nsf/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace nsf {
namespace {

template <typename T>
void put(std::vector<unsigned char>& buf, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  buf.insert(buf.end(), b, b + sizeof(T));
}

template <typename T>
T get(const std::vector<unsigned char>& buf, std::size_t& pos) {
  if (pos + sizeof(T) > buf.size()) throw SnapshotError("snapshot truncated");
  unsigned char b[sizeof(T)];
  std::memcpy(b, buf.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

constexpr char kMagic[4] = {'N', 'S', 'F', '1'};

}  // namespace

void write_snapshot(const std::string& path, const SimState& s) {
  const Grid& g = s.grid();
  std::vector<unsigned char> buf(kMagic, kMagic + 4);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nx()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.ny()));
  put<double>(buf, g.lx());
  put<double>(buf, g.ly());
  put<double>(buf, s.time);
  for (double x : s.rho.values()) put(buf, x);
  for (double x : s.vel.u_values()) put(buf, x);
  for (double x : s.vel.v_values()) put(buf, x);
  for (double x : s.theta.values()) put(buf, x);
  for (double x : s.pi.values()) put(buf, x);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SnapshotError("cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!f) throw SnapshotError("write failed for '" + path + "'");
}

SimState read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SnapshotError("cannot open snapshot '" + path + "'");
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(f)),
                                       std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw SnapshotError("'" + path + "' is not a snapshot (bad magic)");
  std::size_t pos = 4;
  const auto nx = get<std::uint32_t>(buf, pos);
  const auto ny = get<std::uint32_t>(buf, pos);
  const double lx = get<double>(buf, pos), ly = get<double>(buf, pos), t = get<double>(buf, pos);
  if (nx < 4 || ny < 4 || nx > (1u << 16) || ny > (1u << 16))
    throw SnapshotError("snapshot grid size out of range");
  const Grid g(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
  const std::size_t expected = pos + 8 * (3 * g.cells() + g.u_faces() + g.v_faces());
  if (buf.size() != expected)
    throw SnapshotError("snapshot length " + std::to_string(buf.size()) + " != expected " +
                        std::to_string(expected));
  SimState s(g);
  s.time = t;
  for (double& x : s.rho.values()) x = get<double>(buf, pos);
  for (double& x : s.vel.u_values()) x = get<double>(buf, pos);
  for (double& x : s.vel.v_values()) x = get<double>(buf, pos);
  for (double& x : s.theta.values()) x = get<double>(buf, pos);
  for (double& x : s.pi.values()) x = get<double>(buf, pos);
  return s;
}

}  // namespace nsf
