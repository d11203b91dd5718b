#include "nsf/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsf {
namespace {

inline double upwind(double a, double left, double right) {
  if (a > 0.0) return a * left;
  if (a < 0.0) return a * right;
  return 0.5 * a * (left + right);
}

inline double inflow(double outward_flux) { return std::min(outward_flux, 0.0); }

}  // namespace

VectorField mass_flux(const ScalarField& rho, const VectorField& adv, const Grid& g) {
  require_same_grid(rho.grid(), g, "mass_flux");
  require_same_grid(adv.grid(), g, "mass_flux");
  VectorField f(g);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) f.u(i, j) = upwind(adv.u(i, j), rho(i - 1, j), rho(i, j));
#pragma omp parallel for schedule(static)
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) f.v(i, j) = upwind(adv.v(i, j), rho(i, j - 1), rho(i, j));
  return f;
}

double courant_number(const VectorField& adv, double dt, const Grid& g) {
  require_same_grid(adv.grid(), g, "courant_number");
  double worst = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double out = (std::max(adv.u(i + 1, j), 0.0) - std::min(adv.u(i, j), 0.0)) / g.hx() +
                         (std::max(adv.v(i, j + 1), 0.0) - std::min(adv.v(i, j), 0.0)) / g.hy();
      worst = std::max(worst, dt * out);
    }
  return worst;
}

ScalarField transport_density(const ScalarField& rho, const VectorField& adv, double dt,
                              const Grid& g) {
  const double cfl = courant_number(adv, dt, g);
  if (cfl > 1.0)
    throw std::domain_error("transport_density: Courant number " + std::to_string(cfl) + " > 1");
  const VectorField f = mass_flux(rho, adv, g);
  ScalarField out(rho);
  const double cx = dt / g.hx(), cy = dt / g.hy();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      out(i, j) -= cx * (f.u(i + 1, j) - f.u(i, j)) + cy * (f.v(i, j + 1) - f.v(i, j));
  return out;
}

void add_scalar_advection(const VectorField& flux, const ScalarField& s, ScalarField& out) {
  const Grid& g = s.grid();
  const int nx = g.nx(), ny = g.ny();
  const double rhx = 1.0 / g.hx(), rhy = 1.0 / g.hy();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double sc = s(i, j);
      double acc = 0.0;
      if (i > 0) acc += inflow(-flux.u(i, j)) * (s(i - 1, j) - sc) * rhx;
      if (i < nx - 1) acc += inflow(flux.u(i + 1, j)) * (s(i + 1, j) - sc) * rhx;
      if (j > 0) acc += inflow(-flux.v(i, j)) * (s(i, j - 1) - sc) * rhy;
      if (j < ny - 1) acc += inflow(flux.v(i, j + 1)) * (s(i, j + 1) - sc) * rhy;
      out(i, j) += acc;
    }
}

ScalarField scalar_advection_diagonal(const VectorField& flux) {
  const Grid& g = flux.grid();
  ScalarField d(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      d(i, j) = -(inflow(-flux.u(i, j)) + inflow(flux.u(i + 1, j))) / g.hx() -
                (inflow(-flux.v(i, j)) + inflow(flux.v(i, j + 1))) / g.hy();
  return d;
}

namespace {

// Outward fluxes of the u control volume around face (i,j): east, west, north, south.
struct FaceCvFlux {
  double e, w, n, s;
};

inline FaceCvFlux u_cv_flux(const VectorField& f, int i, int j) {
  return {0.5 * (f.u(i, j) + f.u(i + 1, j)), -0.5 * (f.u(i - 1, j) + f.u(i, j)),
          0.5 * (f.v(i - 1, j + 1) + f.v(i, j + 1)), -0.5 * (f.v(i - 1, j) + f.v(i, j))};
}

inline FaceCvFlux v_cv_flux(const VectorField& f, int i, int j) {
  return {0.5 * (f.u(i + 1, j - 1) + f.u(i + 1, j)), -0.5 * (f.u(i, j - 1) + f.u(i, j)),
          0.5 * (f.v(i, j) + f.v(i, j + 1)), -0.5 * (f.v(i, j - 1) + f.v(i, j))};
}

}  // namespace

void add_velocity_advection(const VectorField& flux, const VectorField& w, VectorField& out) {
  const Grid& g = w.grid();
  const int nx = g.nx(), ny = g.ny();
  const double rhx = 1.0 / g.hx(), rhy = 1.0 / g.hy();
  // Neighbours across a wall (north/south for u, east/west for v) only appear
  // behind zero fluxes, so they are never read.
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const FaceCvFlux F = u_cv_flux(flux, i, j);
      const double wc = w.u(i, j);
      double acc = inflow(F.e) * (w.u(i + 1, j) - wc) * rhx + inflow(F.w) * (w.u(i - 1, j) - wc) * rhx;
      if (j < ny - 1) acc += inflow(F.n) * (w.u(i, j + 1) - wc) * rhy;
      if (j > 0) acc += inflow(F.s) * (w.u(i, j - 1) - wc) * rhy;
      out.u(i, j) += acc;
    }
#pragma omp parallel for schedule(static)
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const FaceCvFlux F = v_cv_flux(flux, i, j);
      const double wc = w.v(i, j);
      double acc = inflow(F.n) * (w.v(i, j + 1) - wc) * rhy + inflow(F.s) * (w.v(i, j - 1) - wc) * rhy;
      if (i < nx - 1) acc += inflow(F.e) * (w.v(i + 1, j) - wc) * rhx;
      if (i > 0) acc += inflow(F.w) * (w.v(i - 1, j) - wc) * rhx;
      out.v(i, j) += acc;
    }
}

VectorField velocity_advection_diagonal(const VectorField& flux) {
  const Grid& g = flux.grid();
  const int nx = g.nx(), ny = g.ny();
  VectorField d(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const FaceCvFlux F = u_cv_flux(flux, i, j);
      d.u(i, j) = -(inflow(F.e) + inflow(F.w)) / g.hx() - (inflow(F.n) + inflow(F.s)) / g.hy();
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const FaceCvFlux F = v_cv_flux(flux, i, j);
      d.v(i, j) = -(inflow(F.n) + inflow(F.s)) / g.hy() - (inflow(F.e) + inflow(F.w)) / g.hx();
    }
  return d;
}

ScalarField advect_scalar(const ScalarField& s, const ScalarField& rho, const VectorField& adv,
                          const Grid& g) {
  require_same_grid(s.grid(), g, "advect_scalar");
  ScalarField out(g);
  add_scalar_advection(mass_flux(rho, adv, g), s, out);
  return out;
}

VectorField advect_velocity(const VectorField& w, const ScalarField& rho, const VectorField& adv,
                            const Grid& g) {
  require_same_grid(w.grid(), g, "advect_velocity");
  VectorField out(g);
  add_velocity_advection(mass_flux(rho, adv, g), w, out);
  return out;
}

VectorField face_density(const ScalarField& rho) {
  const Grid& g = rho.grid();
  VectorField r(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) r.u(i, j) = 0.5 * (rho(i - 1, j) + rho(i, j));
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) r.v(i, j) = 0.5 * (rho(i, j - 1) + rho(i, j));
  return r;
}

}  // namespace nsf
