#include "nsf/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace nsf {
namespace {

constexpr double pi = std::numbers::pi;

// Velocity from node values of a stream function vanishing on the walls.
VectorField curl_of_nodes(const Grid& g, const std::vector<double>& psi) {
  VectorField w(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      w.u(i, j) = (psi[g.node(i, j + 1)] - psi[g.node(i, j)]) / g.hy();
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      w.v(i, j) = -(psi[g.node(i + 1, j)] - psi[g.node(i, j)]) / g.hx();
  w.zero_boundary_normals();
  return w;
}

double sin2(double s) { return std::sin(s) * std::sin(s); }

}  // namespace

VectorField stream_velocity(const Grid& g, double amp, int k) {
  std::vector<double> psi(g.nodes());
  const double scale = amp * g.ly() / (k * pi);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      psi[g.node(i, j)] = scale * sin2(k * pi * g.xf(i) / g.lx()) * sin2(k * pi * g.yf(j) / g.ly());
  return curl_of_nodes(g, psi);
}

ScalarField warm_spot(const Grid& g, double x0, double y0, double radius) {
  ScalarField b(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double r = std::hypot(g.xc(i) - x0, g.yc(j) - y0);
      if (r < radius) b(i, j) = std::pow(std::cos(0.5 * pi * r / radius), 2);
    }
  return b;
}

SimState initial_state(const RunConfig& c) {
  c.validate();
  const Grid g(c.nx, c.ny, c.lx, c.ly);
  SimState s(g);

  if (c.scenario == "random") {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double cr[3][3], ct[3][3], cp[2][2];
    for (auto& row : cr)
      for (double& x : row) x = U(rng);
    for (auto& row : ct)
      for (double& x : row) x = U(rng);
    for (auto& row : cp)
      for (double& x : row) x = U(rng);

    ScalarField f(g), t(g);
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        double a = 0.0, b = 0.0;
        for (int kx = 0; kx < 3; ++kx)
          for (int ky = 0; ky < 3; ++ky) {
            const double mode = std::cos(kx * pi * g.xc(i) / g.lx()) * std::cos(ky * pi * g.yc(j) / g.ly());
            if (kx + ky > 0) a += cr[kx][ky] * mode;
            b += ct[kx][ky] * mode;
          }
        f(i, j) = a;
        t(i, j) = b;
      }
    double fmax = 0.0;
    for (double x : f.values()) fmax = std::max(fmax, std::abs(x));
    for (std::size_t k = 0; k < f.size(); ++k) s.rho[k] = 1.0 + c.rho_amplitude * f[k] / fmax;
    const double tmin = t.min(), tspan = t.max() - tmin;
    for (std::size_t k = 0; k < t.size(); ++k)
      s.theta[k] = c.theta_min + c.theta_bump * (t[k] - tmin) / tspan;

    std::vector<double> psi(g.nodes());
    for (int j = 0; j <= g.ny(); ++j)
      for (int i = 0; i <= g.nx(); ++i) {
        double p = 0.0;
        for (int kx = 1; kx <= 2; ++kx)
          for (int ky = 1; ky <= 2; ++ky)
            p += cp[kx - 1][ky - 1] * sin2(kx * pi * g.xf(i) / g.lx()) * sin2(ky * pi * g.yf(j) / g.ly());
        psi[g.node(i, j)] = p;
      }
    s.vel = curl_of_nodes(g, psi);
    double vmax = 0.0;
    for (double x : s.vel.u_values()) vmax = std::max(vmax, std::abs(x));
    for (double x : s.vel.v_values()) vmax = std::max(vmax, std::abs(x));
    if (vmax > 0.0) {
      for (double& x : s.vel.u_values()) x *= c.velocity_amplitude / vmax;
      for (double& x : s.vel.v_values()) x *= c.velocity_amplitude / vmax;
    }
    return s;
  }

  const ScalarField spot = warm_spot(g, 0.5 * c.lx, 0.5 * c.ly, c.bump_radius);
  for (std::size_t k = 0; k < spot.size(); ++k) s.theta[k] = c.theta_min + c.theta_bump * spot[k];
  if (c.scenario == "pudding") {
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        s.rho(i, j) = 1.0 + c.rho_amplitude * std::sin(2.0 * pi * g.xc(i) / g.lx()) *
                                std::sin(pi * g.yc(j) / g.ly());
    s.vel = stream_velocity(g, c.velocity_amplitude, c.velocity_mode);
  }
  return s;
}

}  // namespace nsf
