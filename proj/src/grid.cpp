#include "nsf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nsf/parallel.hpp"

namespace nsf {

Grid::Grid(int nx, int ny, double lx, double ly)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), hx_(lx / nx), hy_(ly / ny) {
  if (nx < 4 || ny < 4) throw std::invalid_argument("grid needs at least 4 cells per direction");
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("grid extents must be positive");
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid dimension mismatch");
}

double ScalarField::min() const { return *std::min_element(data_.begin(), data_.end()); }
double ScalarField::max() const { return *std::max_element(data_.begin(), data_.end()); }

bool ScalarField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double VectorField::boundary_normal_max() const {
  double m = 0.0;
  for (int j = 0; j < grid_.ny(); ++j)
    m = std::max({m, std::abs(u(0, j)), std::abs(u(grid_.nx(), j))});
  for (int i = 0; i < grid_.nx(); ++i)
    m = std::max({m, std::abs(v(i, 0)), std::abs(v(i, grid_.ny()))});
  return m;
}

void VectorField::zero_boundary_normals() {
  for (int j = 0; j < grid_.ny(); ++j) u(0, j) = u(grid_.nx(), j) = 0.0;
  for (int i = 0; i < grid_.nx(); ++i) v(i, 0) = v(i, grid_.ny()) = 0.0;
}

bool VectorField::all_finite() const {
  auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(u_.begin(), u_.end(), finite) && std::all_of(v_.begin(), v_.end(), finite);
}

ScalarField divergence(const VectorField& w, const Grid& g) {
  require_same_grid(w.grid(), g, "divergence");
  ScalarField out(g);
  const double rhx = 1.0 / g.hx(), rhy = 1.0 / g.hy();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      out(i, j) = (w.u(i + 1, j) - w.u(i, j)) * rhx + (w.v(i, j + 1) - w.v(i, j)) * rhy;
  return out;
}

VectorField gradient(const ScalarField& s, const Grid& g) {
  require_same_grid(s.grid(), g, "gradient");
  VectorField out(g);
  const double rhx = 1.0 / g.hx(), rhy = 1.0 / g.hy();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 1; i < g.nx(); ++i) out.u(i, j) = (s(i, j) - s(i - 1, j)) * rhx;
#pragma omp parallel for schedule(static)
  for (int j = 1; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) out.v(i, j) = (s(i, j) - s(i, j - 1)) * rhy;
  return out;
}

StrainRate strain_rate(const VectorField& w, const Grid& g) {
  require_same_grid(w.grid(), g, "strain_rate");
  StrainRate d(g);
  const int nx = g.nx(), ny = g.ny();
  const double rhx = 1.0 / g.hx(), rhy = 1.0 / g.hy();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      d.xx(i, j) = (w.u(i + 1, j) - w.u(i, j)) * rhx;
      d.yy(i, j) = (w.v(i, j + 1) - w.v(i, j)) * rhy;
    }
#pragma omp parallel for schedule(static)
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      // Tangential velocity vanishes on the wall: ghost = -(first interior value).
      double dudy;
      if (j == 0)
        dudy = 2.0 * w.u(i, 0) * rhy;
      else if (j == ny)
        dudy = -2.0 * w.u(i, ny - 1) * rhy;
      else
        dudy = (w.u(i, j) - w.u(i, j - 1)) * rhy;
      double dvdx;
      if (i == 0)
        dvdx = 2.0 * w.v(0, j) * rhx;
      else if (i == nx)
        dvdx = -2.0 * w.v(nx - 1, j) * rhx;
      else
        dvdx = (w.v(i, j) - w.v(i - 1, j)) * rhx;
      d.xy_node[g.node(i, j)] = 0.5 * (dudy + dvdx);
    }
  return d;
}

TensorField sym_gradient(const VectorField& w, const Grid& g) {
  const StrainRate d = strain_rate(w, g);
  TensorField t(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      t.xx(i, j) = d.xx(i, j);
      t.yy(i, j) = d.yy(i, j);
      t.xy(i, j) = 0.25 * (d.xy_node[g.node(i, j)] + d.xy_node[g.node(i + 1, j)] +
                           d.xy_node[g.node(i, j + 1)] + d.xy_node[g.node(i + 1, j + 1)]);
    }
  return t;
}

ScalarField div_coeff_grad(const ScalarField& coeff, const ScalarField& s, BoundaryKind bc,
                           const Grid& g) {
  require_same_grid(coeff.grid(), g, "div_coeff_grad");
  require_same_grid(s.grid(), g, "div_coeff_grad");
  if (!(coeff.min() > 0.0)) throw std::invalid_argument("div_coeff_grad: coefficient must be positive");
  const int nx = g.nx(), ny = g.ny();
  const double rx = 1.0 / (g.hx() * g.hx()), ry = 1.0 / (g.hy() * g.hy());
  const bool dirichlet = bc == BoundaryKind::dirichlet;
  auto hmean = [](double a, double b) { return 2.0 * a * b / (a + b); };
  ScalarField out(g);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double c = coeff(i, j), sc = s(i, j);
      double acc = 0.0;
      if (i > 0)
        acc += hmean(c, coeff(i - 1, j)) * (s(i - 1, j) - sc) * rx;
      else if (dirichlet)
        acc -= 2.0 * c * sc * rx;
      if (i < nx - 1)
        acc += hmean(c, coeff(i + 1, j)) * (s(i + 1, j) - sc) * rx;
      else if (dirichlet)
        acc -= 2.0 * c * sc * rx;
      if (j > 0)
        acc += hmean(c, coeff(i, j - 1)) * (s(i, j - 1) - sc) * ry;
      else if (dirichlet)
        acc -= 2.0 * c * sc * ry;
      if (j < ny - 1)
        acc += hmean(c, coeff(i, j + 1)) * (s(i, j + 1) - sc) * ry;
      else if (dirichlet)
        acc -= 2.0 * c * sc * ry;
      out(i, j) = acc;
    }
  return out;
}

std::vector<double> node_average(const ScalarField& c) {
  const Grid& g = c.grid();
  const int nx = g.nx(), ny = g.ny();
  std::vector<double> out(g.nodes(), 0.0);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      double s = 0.0;
      int n = 0;
      for (int jj = j - 1; jj <= j; ++jj)
        for (int ii = i - 1; ii <= i; ++ii)
          if (ii >= 0 && ii < nx && jj >= 0 && jj < ny) {
            s += c(ii, jj);
            ++n;
          }
      out[g.node(i, j)] = s / n;
    }
  return out;
}

VectorField viscous_force(const VectorField& w, const ScalarField& nu, const Grid& g) {
  return viscous_force(w, nu, node_average(nu), g);
}

VectorField viscous_force(const VectorField& w, const ScalarField& nu,
                          const std::vector<double>& nu_node, const Grid& g) {
  require_same_grid(nu.grid(), g, "viscous_force");
  if (nu_node.size() != g.nodes()) throw std::invalid_argument("viscous_force: node array size");
  const StrainRate d = strain_rate(w, g);
  const int nx = g.nx(), ny = g.ny();
  const double rhx = 1.0 / g.hx(), rhy = 1.0 / g.hy();

  std::vector<double> tau(g.nodes());
  for (std::size_t k = 0; k < tau.size(); ++k) tau[k] = nu_node[k] * d.xy_node[k];

  VectorField f(g);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      f.u(i, j) = (nu(i, j) * d.xx(i, j) - nu(i - 1, j) * d.xx(i - 1, j)) * rhx +
                  (tau[g.node(i, j + 1)] - tau[g.node(i, j)]) * rhy;
#pragma omp parallel for schedule(static)
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      f.v(i, j) = (nu(i, j) * d.yy(i, j) - nu(i, j - 1) * d.yy(i, j - 1)) * rhy +
                  (tau[g.node(i + 1, j)] - tau[g.node(i, j)]) * rhx;
  return f;
}

ScalarField dissipation_density(const VectorField& w, const ScalarField& nu, const Grid& g) {
  require_same_grid(nu.grid(), g, "dissipation_density");
  const StrainRate d = strain_rate(w, g);
  const std::vector<double> nu_node = node_average(nu);
  std::vector<double> shear(g.nodes());
  for (std::size_t k = 0; k < shear.size(); ++k)
    shear[k] = 2.0 * nu_node[k] * d.xy_node[k] * d.xy_node[k];
  ScalarField q(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      q(i, j) = nu(i, j) * (d.xx(i, j) * d.xx(i, j) + d.yy(i, j) * d.yy(i, j)) +
                0.25 * (shear[g.node(i, j)] + shear[g.node(i + 1, j)] + shear[g.node(i, j + 1)] +
                        shear[g.node(i + 1, j + 1)]);
  return q;
}

double face_inner(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "face_inner");
  return (dot(a.u_values(), b.u_values()) + dot(a.v_values(), b.v_values())) *
         a.grid().cell_area();
}

}  // namespace nsf
