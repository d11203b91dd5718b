#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nsf {

/// Uniform MAC grid on the rectangle [0,lx] x [0,ly].
///
/// Layout (all arrays row-major with x fastest):
///   cell (i,j)    i in [0,nx),  j in [0,ny)    index j*nx + i
///   u-face (i,j)  i in [0,nx],  j in [0,ny)    index j*(nx+1) + i, at x = i*hx
///   v-face (i,j)  i in [0,nx),  j in [0,ny]    index j*nx + i,     at y = j*hy
///   node (i,j)    i in [0,nx],  j in [0,ny]    index j*(nx+1) + i
class Grid {
 public:
  Grid(int nx, int ny, double lx, double ly);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double cell_area() const { return hx_ * hy_; }
  double area() const { return lx_ * ly_; }

  std::size_t cells() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t u_faces() const { return static_cast<std::size_t>(nx_ + 1) * ny_; }
  std::size_t v_faces() const { return static_cast<std::size_t>(nx_) * (ny_ + 1); }
  std::size_t nodes() const { return static_cast<std::size_t>(nx_ + 1) * (ny_ + 1); }

  std::size_t cell(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  std::size_t u_index(int i, int j) const { return static_cast<std::size_t>(j) * (nx_ + 1) + i; }
  std::size_t v_index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  std::size_t node(int i, int j) const { return static_cast<std::size_t>(j) * (nx_ + 1) + i; }

  double xc(int i) const { return (i + 0.5) * hx_; }
  double yc(int j) const { return (j + 0.5) * hy_; }
  double xf(int i) const { return i * hx_; }
  double yf(int j) const { return j * hy_; }

  bool operator==(const Grid& o) const {
    return nx_ == o.nx_ && ny_ == o.ny_ && lx_ == o.lx_ && ly_ == o.ly_;
  }

 private:
  int nx_, ny_;
  double lx_, ly_, hx_, hy_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Cell-centred scalar (density, temperature, pressure).
class ScalarField {
 public:
  explicit ScalarField(const Grid& g, double value = 0.0)
      : grid_(g), data_(g.cells(), value) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int i, int j) { return data_[grid_.cell(i, j)]; }
  double operator()(int i, int j) const { return data_[grid_.cell(i, j)]; }
  double& operator[](std::size_t k) { return data_[k]; }
  double operator[](std::size_t k) const { return data_[k]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  double min() const;
  double max() const;
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// Face-normal velocity components. Boundary-face normals are the wall trace.
class VectorField {
 public:
  explicit VectorField(const Grid& g)
      : grid_(g), u_(g.u_faces(), 0.0), v_(g.v_faces(), 0.0) {}

  const Grid& grid() const { return grid_; }

  double& u(int i, int j) { return u_[grid_.u_index(i, j)]; }
  double u(int i, int j) const { return u_[grid_.u_index(i, j)]; }
  double& v(int i, int j) { return v_[grid_.v_index(i, j)]; }
  double v(int i, int j) const { return v_[grid_.v_index(i, j)]; }

  std::vector<double>& u_values() { return u_; }
  const std::vector<double>& u_values() const { return u_; }
  std::vector<double>& v_values() { return v_; }
  const std::vector<double>& v_values() const { return v_; }

  /// Largest |normal component| over the four walls.
  double boundary_normal_max() const;
  /// Sets the wall normal components to zero.
  void zero_boundary_normals();
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<double> u_, v_;
};

/// Symmetric 2x2 tensor at cell centres; the off-diagonal is stored once.
struct TensorField {
  ScalarField xx, yy, xy;
  explicit TensorField(const Grid& g) : xx(g), yy(g), xy(g) {}
};

/// Strain rate in the staggering the viscous operator uses: normal strains at
/// cell centres, shear strain at nodes with mirror ghosts at no-slip walls.
struct StrainRate {
  ScalarField xx, yy;
  std::vector<double> xy_node;
  explicit StrainRate(const Grid& g) : xx(g), yy(g), xy_node(g.nodes(), 0.0) {}
};

enum class BoundaryKind { neumann, dirichlet };

/// Face-difference divergence at cell centres.
ScalarField divergence(const VectorField& w, const Grid& g);

/// Centred cell-to-face differences; wall faces receive zero.
VectorField gradient(const ScalarField& s, const Grid& g);

StrainRate strain_rate(const VectorField& w, const Grid& g);

/// D(w) = (grad w + grad w^T)/2 at cell centres. The shear component is the
/// average of the four surrounding node values of strain_rate().
TensorField sym_gradient(const VectorField& w, const Grid& g);

/// div(coeff grad s) with harmonic-mean face coefficients. Neumann closes the
/// walls with zero flux; Dirichlet imposes s = 0 on the walls.
ScalarField div_coeff_grad(const ScalarField& coeff, const ScalarField& s, BoundaryKind bc,
                           const Grid& g);

/// Viscosity sampled at nodes: mean of the adjacent cells (4, 2 or 1).
std::vector<double> node_average(const ScalarField& c);

/// Discrete div(nu D(w)) on interior faces (wall faces are zero).
///
/// This is minus one half of the gradient of the dissipation functional
///   Phi(w) = sum_cells nu (Dxx^2 + Dyy^2) A + sum_nodes omega nu 2 Dxy^2 A
/// with node weights omega = 1, 1/2, 1/4 (interior, edge, corner), so
///   -sum_faces w . viscous_force(w) A = Phi(w)
/// holds exactly.
VectorField viscous_force(const VectorField& w, const ScalarField& nu, const Grid& g);
/// Same, with node_average(nu) supplied by the caller (hot loops).
VectorField viscous_force(const VectorField& w, const ScalarField& nu,
                          const std::vector<double>& nu_node, const Grid& g);

/// Cell-wise density whose area-weighted sum equals Phi(w). Each node passes a
/// quarter of 2 nu Dxy^2 to every adjacent cell.
ScalarField dissipation_density(const VectorField& w, const ScalarField& nu, const Grid& g);

/// Area-weighted inner product over faces.
double face_inner(const VectorField& a, const VectorField& b);

}  // namespace nsf
