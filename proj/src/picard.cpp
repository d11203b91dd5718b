#include "nsf/picard.hpp"

#include <algorithm>
#include <cmath>

#include "nsf/heat.hpp"
#include "nsf/momentum.hpp"
#include "nsf/parallel.hpp"
#include "nsf/transport.hpp"

namespace nsf {
namespace {

double rel_change(std::span<const double> now, std::span<const double> before) {
  std::vector<double> d(now.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = now[k] - before[k];
  const double dn = norm2(d), base = norm2(now);
  return base > 0.0 ? dn / base : dn;
}

double rel_change(const VectorField& now, const VectorField& before) {
  std::vector<double> a(now.u_values()), b(before.u_values());
  a.insert(a.end(), now.v_values().begin(), now.v_values().end());
  b.insert(b.end(), before.v_values().begin(), before.v_values().end());
  return rel_change(a, b);
}

}  // namespace

void PicardOptions::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("picard tol must lie in (0,1)");
  if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be >= 0");
  momentum.validate();
  projection.validate();
  heat.validate();
}

StepResult advance_once(const SimState& s, double dt, const MaterialLaw& law,
                        const PicardOptions& opt) {
  opt.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("advance: dt must be positive");
  const Grid& g = s.grid();

  SimState it(s);  // current iterate; sweep 0 is the old level
  IterationReport rep;
  rep.dt = dt;
  double prev_combined = 0.0;

  for (int k = 1; k <= opt.max_sweeps; ++k) {
    const VectorField flux = mass_flux(s.rho, it.vel, g);
    ScalarField rho = transport_density(s.rho, it.vel, dt, g);

    const ScalarField nu = viscosity_field(it.theta, law);
    const VectorField vstar =
        momentum_solve(s.vel, s.rho, flux, nu, dt, opt.momentum, opt.forcing.body);
    Projection pr = project(vstar, rho, dt, opt.projection);

    const ScalarField q = dissipation_density(vstar, nu, g);
    ScalarField source(q);
    if (opt.forcing.heat) {
      for (std::size_t c = 0; c < source.size(); ++c) source[c] += (*opt.forcing.heat)[c];
      if (opt.forcing.balance_heat) {
        const double avg = mean(source);
        for (double& x : source.values()) x -= avg;
      }
    }
    ScalarField theta = heat_solve(s.theta, s.rho, rho, flux, conductivity_field(it.theta, law),
                                   source, dt, opt.heat);

    const double drho = rel_change(rho.values(), it.rho.values());
    const double dv = rel_change(pr.vel, it.vel);
    const double dth = rel_change(theta.values(), it.theta.values());
    rep.delta_rho.push_back(drho);
    rep.delta_v.push_back(dv);
    rep.delta_theta.push_back(dth);
    const double combined = drho + dv + dth;
    if (k > 1) rep.contraction_ratios.push_back(prev_combined > 0.0 ? combined / prev_combined : 0.0);
    prev_combined = combined;
    rep.sweeps = k;

    it.rho = std::move(rho);
    it.vel = std::move(pr.vel);
    it.pi = std::move(pr.pressure);
    it.theta = std::move(theta);

    // Energy bookkeeping of the latest sweep (the accepted one if we stop here).
    const VectorField f = viscous_force(vstar, nu, g);
    rep.viscous_work = -dt * face_inner(vstar, f);
    rep.heat_input = dt * sum(q.values()) * g.cell_area();

    if (std::max({drho, dv, dth}) < opt.tol) {
      rep.converged = true;
      break;
    }
  }
  it.time = s.time + dt;
  return StepResult{std::move(it), std::move(rep)};
}

namespace {

StepResult advance_recursive(const SimState& s, double dt, const MaterialLaw& law,
                             const PicardOptions& opt, int depth) {
  std::string why;
  try {
    StepResult r = advance_once(s, dt, law, opt);
    if (r.report.converged) return r;
    why = "no convergence in " + std::to_string(opt.max_sweeps) + " sweeps";
  } catch (const SolverError& e) {
    why = e.what();
  } catch (const std::domain_error& e) {
    why = e.what();
  }
  if (depth >= opt.max_halvings)
    throw StepRejected("step rejected at dt = " + std::to_string(dt) + " (" + why + ")");

  StepResult a = advance_recursive(s, 0.5 * dt, law, opt, depth + 1);
  StepResult b = advance_recursive(a.state, 0.5 * dt, law, opt, depth + 1);
  IterationReport& rb = b.report;
  rb.dt = a.report.dt + rb.dt;
  rb.substeps += a.report.substeps;
  rb.viscous_work += a.report.viscous_work;
  rb.heat_input += a.report.heat_input;
  // Guard against drift in the summed time.
  b.state.time = s.time + dt;
  return b;
}

}  // namespace

StepResult advance(const SimState& s, double dt, const MaterialLaw& law, const PicardOptions& opt) {
  opt.validate();
  return advance_recursive(s, dt, law, opt, 0);
}

StepResult advance(const SimState& s, double dt, const MaterialLaw& law, double tol,
                   int max_sweeps) {
  PicardOptions opt;
  opt.tol = tol;
  opt.max_sweeps = max_sweeps;
  return advance(s, dt, law, opt);
}

double contraction_certificate(const IterationReport& r, double noise_floor) {
  if (r.sweeps < 3) throw std::invalid_argument("contraction_certificate needs at least 3 sweeps");
  const std::size_t n = static_cast<std::size_t>(r.sweeps);
  if (r.delta_rho.size() != n || r.delta_v.size() != n || r.delta_theta.size() != n)
    throw std::invalid_argument("contraction_certificate: delta arrays do not match sweeps");
  double worst = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double prev = r.delta_rho[k - 1] + r.delta_v[k - 1] + r.delta_theta[k - 1];
    const double cur = r.delta_rho[k] + r.delta_v[k] + r.delta_theta[k];
    if (prev <= 0.0 || cur < noise_floor) continue;
    worst = std::max(worst, cur / prev);
  }
  return worst;
}

}  // namespace nsf
