#include "nsf/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "nsf/parallel.hpp"
#include "nsf/transport.hpp"

namespace nsf {
namespace {

// Packed unknown vector: all u faces followed by all v faces.
void unpack(std::span<const double> x, VectorField& w) {
  const std::size_t nu = w.u_values().size();
  std::copy(x.begin(), x.begin() + nu, w.u_values().begin());
  std::copy(x.begin() + nu, x.end(), w.v_values().begin());
}

void pack(const VectorField& w, std::span<double> x) {
  const std::size_t nu = w.u_values().size();
  std::copy(w.u_values().begin(), w.u_values().end(), x.begin());
  std::copy(w.v_values().begin(), w.v_values().end(), x.begin() + nu);
}

bool is_wall_u(const Grid& g, std::size_t k) {
  const std::size_t i = k % (g.nx() + 1);
  return i == 0 || i == static_cast<std::size_t>(g.nx());
}

bool is_wall_v(const Grid& g, std::size_t k) {
  const std::size_t j = k / g.nx();
  return j == 0 || j == static_cast<std::size_t>(g.ny());
}

// Diagonal of -div(nu D(.)) in the face layout.
VectorField viscous_diagonal(const ScalarField& nu, const Grid& g) {
  const std::vector<double> nn = node_average(nu);
  const int nx = g.nx(), ny = g.ny();
  const double rx = 1.0 / (g.hx() * g.hx()), ry = 1.0 / (g.hy() * g.hy());
  VectorField d(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double top = (j == ny - 1 ? 1.0 : 0.5) * nn[g.node(i, j + 1)];
      const double bot = (j == 0 ? 1.0 : 0.5) * nn[g.node(i, j)];
      d.u(i, j) = (nu(i, j) + nu(i - 1, j)) * rx + (top + bot) * ry;
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double right = (i == nx - 1 ? 1.0 : 0.5) * nn[g.node(i + 1, j)];
      const double left = (i == 0 ? 1.0 : 0.5) * nn[g.node(i, j)];
      d.v(i, j) = (nu(i, j) + nu(i, j - 1)) * ry + (right + left) * rx;
    }
  return d;
}

double mean_of(std::span<const double> a) { return sum(a) / static_cast<double>(a.size()); }

}  // namespace

VectorField momentum_solve(const VectorField& vel_n, const ScalarField& rho_n,
                           const VectorField& flux, const ScalarField& nu, double dt,
                           const LinearSolverSpec& spec, const VectorField* body_force,
                           SolveStats* stats) {
  const Grid& g = vel_n.grid();
  require_same_grid(rho_n.grid(), g, "momentum_solve");
  require_same_grid(flux.grid(), g, "momentum_solve");
  require_same_grid(nu.grid(), g, "momentum_solve");
  if (!(dt > 0.0)) throw std::invalid_argument("momentum_solve: dt must be positive");
  if (!(nu.min() > 0.0)) throw std::invalid_argument("momentum_solve: viscosity must be positive");

  const VectorField rho_f = face_density(rho_n);
  const std::size_t nu_faces = g.u_faces(), n = nu_faces + g.v_faces();
  const double rdt = 1.0 / dt;

  std::vector<double> b(n, 0.0), x(n, 0.0), diag(n, 1.0);
  {
    VectorField rhs(g);
    for (std::size_t k = 0; k < nu_faces; ++k)
      rhs.u_values()[k] = rho_f.u_values()[k] * vel_n.u_values()[k] * rdt;
    for (std::size_t k = 0; k < g.v_faces(); ++k)
      rhs.v_values()[k] = rho_f.v_values()[k] * vel_n.v_values()[k] * rdt;
    if (body_force) {
      require_same_grid(body_force->grid(), g, "momentum_solve");
      for (std::size_t k = 0; k < nu_faces; ++k) rhs.u_values()[k] += body_force->u_values()[k];
      for (std::size_t k = 0; k < g.v_faces(); ++k) rhs.v_values()[k] += body_force->v_values()[k];
    }
    rhs.zero_boundary_normals();
    pack(rhs, b);

    const VectorField adv = velocity_advection_diagonal(flux);
    const VectorField visc = viscous_diagonal(nu, g);
    for (std::size_t k = 0; k < nu_faces; ++k)
      if (!is_wall_u(g, k))
        diag[k] = rho_f.u_values()[k] * rdt + adv.u_values()[k] + visc.u_values()[k];
    for (std::size_t k = 0; k < g.v_faces(); ++k)
      if (!is_wall_v(g, k))
        diag[nu_faces + k] = rho_f.v_values()[k] * rdt + adv.v_values()[k] + visc.v_values()[k];

  }
  std::vector<double> base(n);
  {
    VectorField v0(vel_n);
    v0.zero_boundary_normals();
    pack(v0, base);
  }

  const std::vector<double> nu_node = node_average(nu);
  const LinearOperator A = [&](std::span<const double> in, std::span<double> out) {
    VectorField w(g);
    unpack(in, w);
    VectorField r = viscous_force(w, nu, nu_node, g);
    for (double& f : r.u_values()) f = -f;
    for (double& f : r.v_values()) f = -f;
    add_velocity_advection(flux, w, r);
    for (std::size_t k = 0; k < nu_faces; ++k)
      r.u_values()[k] += rho_f.u_values()[k] * w.u_values()[k] * rdt;
    for (std::size_t k = 0; k < g.v_faces(); ++k)
      r.v_values()[k] += rho_f.v_values()[k] * w.v_values()[k] * rdt;
    pack(r, out);
    // Wall rows are the identity.
    for (int j = 0; j < g.ny(); ++j) {
      out[g.u_index(0, j)] = in[g.u_index(0, j)];
      out[g.u_index(g.nx(), j)] = in[g.u_index(g.nx(), j)];
    }
    for (int i = 0; i < g.nx(); ++i) {
      out[nu_faces + g.v_index(i, 0)] = in[nu_faces + g.v_index(i, 0)];
      out[nu_faces + g.v_index(i, g.ny())] = in[nu_faces + g.v_index(i, g.ny())];
    }
  };
  // Per-component constant-coefficient inverse with mean density and
  // viscosity (normal stress carries nu, shear nu/2); Jacobi when the
  // viscosity varies strongly.
  std::unique_ptr<NoSlipHelmholtz> pu, pv;
  if (nu.max() <= 4.0 * nu.min()) {
    const double nb = sum(nu.values()) / static_cast<double>(g.cells());
    const double shift = sum(rho_n.values()) / static_cast<double>(g.cells()) * rdt;
    pu = std::make_unique<NoSlipHelmholtz>(g, NoSlipHelmholtz::Component::u, shift, nb, 0.5 * nb);
    pv = std::make_unique<NoSlipHelmholtz>(g, NoSlipHelmholtz::Component::v, shift, nb, 0.5 * nb);
  }
  const LinearOperator M = [&](std::span<const double> in, std::span<double> out) {
    if (pu) {
      pu->apply(in.subspan(0, nu_faces), out.subspan(0, nu_faces));
      pv->apply(in.subspan(nu_faces), out.subspan(nu_faces));
      return;
    }
    for (std::size_t k = 0; k < n; ++k) out[k] = in[k] / diag[k];
  };

  // Unknown is the increment over vel_n.
  {
    std::vector<double> a0(n);
    A(base, a0);
    for (std::size_t k = 0; k < n; ++k) b[k] -= a0[k];
  }
  LinearSolverSpec s = spec;
  s.method = LinearSolverSpec::Method::bicgstab;
  const SolveStats st = solve_or_throw(A, M, b, x, s, "momentum solve");
  if (stats) *stats = st;

  for (std::size_t k = 0; k < n; ++k) x[k] += base[k];
  VectorField w(g);
  unpack(x, w);
  w.zero_boundary_normals();
  return w;
}

VectorField momentum_step(const SimState& s, const VectorField& lag_vel,
                          const ScalarField& lag_theta, double dt, const MaterialLaw& law,
                          const LinearSolverSpec& spec, const VectorField* body_force) {
  const Grid& g = s.grid();
  const VectorField flux = mass_flux(s.rho, lag_vel, g);
  return momentum_solve(s.vel, s.rho, flux, viscosity_field(lag_theta, law), dt, spec, body_force);
}

Projection project(const VectorField& vstar, const ScalarField& rho, double dt,
                   const LinearSolverSpec& spec) {
  const Grid& g = vstar.grid();
  require_same_grid(rho.grid(), g, "project");
  if (!(dt > 0.0)) throw std::invalid_argument("project: dt must be positive");
  if (!(rho.min() > 0.0)) throw std::invalid_argument("project: density must be positive");

  // Face coefficients 1/rho_f on interior faces, zero on walls.
  VectorField beta = face_density(rho);
  for (std::size_t k = 0; k < beta.u_values().size(); ++k)
    if (!is_wall_u(g, k)) beta.u_values()[k] = 1.0 / beta.u_values()[k];
  for (std::size_t k = 0; k < beta.v_values().size(); ++k)
    if (!is_wall_v(g, k)) beta.v_values()[k] = 1.0 / beta.v_values()[k];

  VectorField w(vstar);
  w.zero_boundary_normals();
  const ScalarField div = divergence(w, g);
  const double compat = mean_of(div.values());

  // Solve -div(beta grad phi) = -(div w - mean)/dt, which is SPD on mean-free data.
  const std::size_t n = g.cells();
  std::vector<double> b(n), phi(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) b[k] = -(div[k] - compat) / dt;

  const LinearOperator A = [&](std::span<const double> in, std::span<double> out) {
    ScalarField s(g);
    std::copy(in.begin(), in.end(), s.values().begin());
    VectorField gr = gradient(s, g);
    for (std::size_t k = 0; k < gr.u_values().size(); ++k) gr.u_values()[k] *= beta.u_values()[k];
    for (std::size_t k = 0; k < gr.v_values().size(); ++k) gr.v_values()[k] *= beta.v_values()[k];
    const ScalarField d = divergence(gr, g);
    for (std::size_t k = 0; k < n; ++k) out[k] = -d[k];
  };
  double beta_mean = 0.0;
  {
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t k = 0; k < beta.u_values().size(); ++k)
      if (!is_wall_u(g, k)) acc += beta.u_values()[k], ++cnt;
    for (std::size_t k = 0; k < beta.v_values().size(); ++k)
      if (!is_wall_v(g, k)) acc += beta.v_values()[k], ++cnt;
    beta_mean = acc / static_cast<double>(cnt);
  }
  const NeumannHelmholtz pre(g, 0.0, beta_mean);
  const LinearOperator M = [&](std::span<const double> in, std::span<double> out) {
    pre.apply(in, out);
  };

  LinearSolverSpec s = spec;
  s.method = LinearSolverSpec::Method::conjugate_gradient;
  SolveStats st = solve_or_throw(A, M, b, phi, s, "pressure projection");

  // The 2-norm stopping test can leave a few cells with a divergence above
  // tol * max|div w|; tighten and continue from the current iterate.
  const double div_target = spec.tol * max_abs(div.values());
  for (int round = 0; round < 3; ++round) {
    std::vector<double> r(n);
    A(phi, r);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(b[k] - r[k]) * dt);
    if (worst <= div_target) break;
    s.tol = std::max(s.tol * 0.1, 1e-15);
    const SolveStats more = solve(A, M, b, phi, s);
    st.iterations += more.iterations;
    st.relative_residual = more.relative_residual;
  }

  const double phi_mean = mean_of(phi);
  ScalarField p(g);
  for (std::size_t k = 0; k < n; ++k) p[k] = phi[k] - phi_mean;

  const VectorField gp = gradient(p, g);
  for (std::size_t k = 0; k < w.u_values().size(); ++k)
    w.u_values()[k] -= dt * beta.u_values()[k] * gp.u_values()[k];
  for (std::size_t k = 0; k < w.v_values().size(); ++k)
    w.v_values()[k] -= dt * beta.v_values()[k] * gp.v_values()[k];
  return Projection{std::move(w), std::move(p), compat, st};
}

ViscousWork viscous_work(const VectorField& vel, const ScalarField& nu_field, const Grid& g) {
  ScalarField q = dissipation_density(vel, nu_field, g);
  const double total = sum(q.values()) * g.cell_area();
  return ViscousWork{std::move(q), total};
}

double l2_norm(const VectorField& w) { return std::sqrt(face_inner(w, w)); }

StokesSemigroup::StokesSemigroup(const VectorField& v0, double nu, double dt, LinearSolverSpec spec)
    : vel_(v0),
      rho_(v0.grid(), 1.0),
      nu_(v0.grid(), nu),
      zero_flux_(v0.grid()),
      dt_(dt),
      spec_(spec),
      projection_spec_(spec) {
  if (!(nu > 0.0)) throw std::invalid_argument("stokes semigroup: nu must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("stokes semigroup: dt must be positive");
  projection_spec_.tol = std::min(spec.tol, 1e-12);
  vel_.zero_boundary_normals();
}

void StokesSemigroup::step() {
  const VectorField vstar = momentum_solve(vel_, rho_, zero_flux_, nu_, dt_, spec_);
  vel_ = project(vstar, rho_, dt_, projection_spec_).vel;
}

std::vector<double> stokes_semigroup_run(const VectorField& v0, double nu, double dt, int n_steps) {
  if (n_steps < 0) throw std::invalid_argument("stokes_semigroup_run: negative step count");
  StokesSemigroup sg(v0, nu, dt);
  std::vector<double> out{l2_norm(sg.velocity())};
  for (int n = 0; n < n_steps; ++n) {
    sg.step();
    out.push_back(l2_norm(sg.velocity()));
  }
  return out;
}

}  // namespace nsf
