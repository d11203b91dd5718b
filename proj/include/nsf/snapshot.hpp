#pragma once

#include <stdexcept>
#include <string>

#include "nsf/state.hpp"

namespace nsf {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary layout, little-endian: "NSF1", u32 nx, u32 ny, f64 lx, ly, time,
/// then rho (cells), u (u faces), v (v faces), theta (cells), pi (cells) as
/// f64 in the Grid index order.
void write_snapshot(const std::string& path, const SimState& s);
SimState read_snapshot(const std::string& path);

}  // namespace nsf
