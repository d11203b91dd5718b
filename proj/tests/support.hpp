#pragma once

// Shared fixtures and hand-rolled random generators for the property tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "nsf/grid.hpp"
#include "nsf/state.hpp"

namespace nsf::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 gen_;
};

inline constexpr int kTrials = 25;

inline Grid random_grid(Rng& r, int lo = 4, int hi = 14) {
  return Grid(r.integer(lo, hi), r.integer(lo, hi), r.uniform(0.5, 3.0), r.uniform(0.5, 3.0));
}

inline ScalarField random_scalar(const Grid& g, Rng& r, double lo, double hi) {
  ScalarField s(g);
  for (double& x : s.values()) x = r.uniform(lo, hi);
  return s;
}

/// Random face values with zero wall normals.
inline VectorField random_vector(const Grid& g, Rng& r, double amp) {
  VectorField w(g);
  for (double& x : w.u_values()) x = r.uniform(-amp, amp);
  for (double& x : w.v_values()) x = r.uniform(-amp, amp);
  w.zero_boundary_normals();
  return w;
}

/// Exactly divergence-free: curl of a random node stream function that
/// vanishes on the walls.
inline VectorField random_solenoidal(const Grid& g, Rng& r, double amp) {
  std::vector<double> psi(g.nodes(), 0.0);
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) psi[g.node(i, j)] = r.uniform(-amp, amp) * g.hx();
  VectorField w(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      w.u(i, j) = (psi[g.node(i, j + 1)] - psi[g.node(i, j)]) / g.hy();
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      w.v(i, j) = -(psi[g.node(i + 1, j)] - psi[g.node(i, j)]) / g.hx();
  return w;
}

/// Face samples of an analytic velocity.
template <class FU, class FV>
VectorField sample(const Grid& g, FU fu, FV fv) {
  VectorField w(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) w.u(i, j) = fu(g.xf(i), g.yc(j));
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) w.v(i, j) = fv(g.xc(i), g.yf(j));
  return w;
}

template <class F>
ScalarField sample(const Grid& g, F f) {
  ScalarField s(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) s(i, j) = f(g.xc(i), g.yc(j));
  return s;
}

inline double order(double coarse_err, double fine_err) { return std::log2(coarse_err / fine_err); }

/// Fresh scratch directory in the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("nsf_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace nsf::test
