#include "nsf/heat.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "nsf/momentum.hpp"
#include "nsf/parallel.hpp"
#include "nsf/transport.hpp"

namespace nsf {

ScalarField heat_solve(const ScalarField& theta_n, const ScalarField& rho_n,
                       const ScalarField& rho_next, const VectorField& flux,
                       const ScalarField& kappa, const ScalarField& q, double dt,
                       const LinearSolverSpec& spec, SolveStats* stats) {
  const Grid& g = theta_n.grid();
  for (const ScalarField* f : {&rho_n, &rho_next, &kappa, &q})
    require_same_grid(f->grid(), g, "heat_solve");
  require_same_grid(flux.grid(), g, "heat_solve");
  if (!(dt > 0.0)) throw std::invalid_argument("heat_solve: dt must be positive");

  const std::size_t n = g.cells();
  const double rdt = 1.0 / dt;
  std::vector<double> b(n), x(n, 0.0), diag(n);

  {
    const ScalarField adv = scalar_advection_diagonal(flux);
    const double rx = 1.0 / (g.hx() * g.hx()), ry = 1.0 / (g.hy() * g.hy());
    auto hmean = [](double a, double c) { return 2.0 * a * c / (a + c); };
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const double c = kappa(i, j);
        double d = rho_n(i, j) * rdt + adv(i, j);
        if (i > 0) d += hmean(c, kappa(i - 1, j)) * rx;
        if (i < g.nx() - 1) d += hmean(c, kappa(i + 1, j)) * rx;
        if (j > 0) d += hmean(c, kappa(i, j - 1)) * ry;
        if (j < g.ny() - 1) d += hmean(c, kappa(i, j + 1)) * ry;
        diag[g.cell(i, j)] = d;
      }
  }

  const LinearOperator A = [&](std::span<const double> in, std::span<double> out) {
    ScalarField s(g);
    std::copy(in.begin(), in.end(), s.values().begin());
    ScalarField r = div_coeff_grad(kappa, s, BoundaryKind::neumann, g);
    for (std::size_t k = 0; k < n; ++k) r[k] = rho_n[k] * in[k] * rdt - r[k];
    add_scalar_advection(flux, s, r);
    std::copy(r.values().begin(), r.values().end(), out.begin());
  };
  // Constant-coefficient inverse with the mean density and conductivity; the
  // diagonal is kept as a fallback for strongly varying coefficients.
  const double rho_bar = sum(rho_n.values()) / static_cast<double>(n);
  const double k_lo = kappa.min(), k_hi = kappa.max();
  std::unique_ptr<NeumannHelmholtz> fft;
  if (k_hi <= 4.0 * k_lo)
    fft = std::make_unique<NeumannHelmholtz>(g, rho_bar * rdt, sum(kappa.values()) / n);
  const LinearOperator M = [&](std::span<const double> in, std::span<double> out) {
    if (fft) {
      fft->apply(in, out);
      return;
    }
    for (std::size_t k = 0; k < n; ++k) out[k] = in[k] / diag[k];
  };

  // Solve for the increment th - theta_n so the relative tolerance applies to
  // the change over the step rather than to the (large) temperature itself.
  A(theta_n.values(), b);
  for (std::size_t k = 0; k < n; ++k) b[k] = rho_n[k] * theta_n[k] * rdt + q[k] - b[k];

  LinearSolverSpec s = spec;
  s.method = LinearSolverSpec::Method::bicgstab;
  const SolveStats st = solve_or_throw(A, M, b, x, s, "heat solve");
  if (stats) *stats = st;

  ScalarField th(g);
  for (std::size_t k = 0; k < n; ++k) th[k] = theta_n[k] + x[k];

  // Remove the solver's share of the thermal-energy budget error.
  const double before = dot(rho_n.values(), theta_n.values());
  const double after = dot(rho_next.values(), th.values());
  const double shift = (before + dt * sum(q.values()) - after) / sum(rho_next.values());
  for (std::size_t k = 0; k < n; ++k) th[k] += shift;
  return th;
}

ScalarField heat_step(const SimState& s, const VectorField& lag_vel, const ScalarField& lag_theta,
                      const VectorField& new_vel, double dt, const MaterialLaw& law,
                      const LinearSolverSpec& spec, const ScalarField* extra_source) {
  const Grid& g = s.grid();
  const VectorField flux = mass_flux(s.rho, lag_vel, g);
  ScalarField rho_next(s.rho);
  {
    const ScalarField d = divergence(flux, g);
    for (std::size_t k = 0; k < rho_next.size(); ++k) rho_next[k] -= dt * d[k];
  }
  ScalarField q = viscous_work(new_vel, viscosity_field(lag_theta, law), g).density;
  if (extra_source) {
    require_same_grid(extra_source->grid(), g, "heat_step");
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += (*extra_source)[k];
  }
  return heat_solve(s.theta, s.rho, rho_next, flux, conductivity_field(lag_theta, law), q, dt,
                    spec);
}

struct HeatSemigroup::Solver {
  NeumannHelmholtz op;
  Solver(const Grid& g, double kappa, double dt) : op(g, 1.0 / dt, kappa) {}
};

HeatSemigroup::HeatSemigroup(const ScalarField& e0, double kappa, double dt)
    : e_(e0), dt_(dt) {
  if (!(kappa > 0.0)) throw std::invalid_argument("heat semigroup: kappa must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("heat semigroup: dt must be positive");
  solver_ = std::make_unique<Solver>(e0.grid(), kappa, dt);
}

HeatSemigroup::~HeatSemigroup() = default;

void HeatSemigroup::step() {
  std::vector<double> rhs(e_.size());
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = e_[k] / dt_;
  solver_->op.apply(rhs, e_.values());
}

HeatSeries heat_semigroup_run(const ScalarField& e0, double kappa, double dt, int n_steps) {
  if (n_steps < 0) throw std::invalid_argument("heat_semigroup_run: negative step count");
  HeatSemigroup sg(e0, kappa, dt);
  HeatSeries out;
  out.l2.push_back(l2_norm(sg.field()));
  out.mean.push_back(mean(sg.field()));
  for (int n = 0; n < n_steps; ++n) {
    sg.step();
    out.l2.push_back(l2_norm(sg.field()));
    out.mean.push_back(mean(sg.field()));
  }
  return out;
}

double l2_norm(const ScalarField& s) {
  return std::sqrt(dot(s.values(), s.values()) * s.grid().cell_area());
}

double mean(const ScalarField& s) { return sum(s.values()) / static_cast<double>(s.size()); }

}  // namespace nsf
