#pragma once

#include <vector>

#include "nsf/grid.hpp"
#include "nsf/linear_solver.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// Implicit momentum step with frozen coefficients,
///   rho_f (w - vel_n)/dt + A_F(w) - div(nu D(w)) = body_force,
/// where A_F is the upwind advection operator for the face mass flux `flux`
/// and rho_f the face mean of rho_n. Wall faces are held at zero. Returns
/// the unprojected w.
VectorField momentum_solve(const VectorField& vel_n, const ScalarField& rho_n,
                           const VectorField& flux, const ScalarField& nu, double dt,
                           const LinearSolverSpec& spec, const VectorField* body_force = nullptr,
                           SolveStats* stats = nullptr);

/// momentum_solve with the flux built from s.rho and lag_vel and nu = nu(lag_theta).
VectorField momentum_step(const SimState& s, const VectorField& lag_vel,
                          const ScalarField& lag_theta, double dt, const MaterialLaw& law,
                          const LinearSolverSpec& spec, const VectorField* body_force = nullptr);

struct Projection {
  VectorField vel;
  ScalarField pressure;
  /// Mean of div(vstar); zero up to round-off because wall normals vanish.
  double compatibility_residual = 0.0;
  SolveStats stats;
};

/// Variable-density projection: div((1/rho_f) grad phi) = div(vstar)/dt with
/// homogeneous Neumann data, vel = vstar - dt grad(phi)/rho_f, pressure = phi
/// with zero mean. CG preconditioned by the constant-coefficient DCT solver.
Projection project(const VectorField& vstar, const ScalarField& rho, double dt,
                   const LinearSolverSpec& spec);

struct ViscousWork {
  ScalarField density;
  double total;
};

/// Cellwise dissipation nu D:D and its integral, in the discrete form that is
/// dual to the viscous operator of momentum_solve.
ViscousWork viscous_work(const VectorField& vel, const ScalarField& nu_field, const Grid& g);

/// sqrt(sum_faces w^2 hx hy).
double l2_norm(const VectorField& w);

/// Constant-coefficient Stokes flow (rho = 1, fixed nu, no advection),
/// stepped with the same implicit solve and projection as the full scheme.
class StokesSemigroup {
 public:
  StokesSemigroup(const VectorField& v0, double nu, double dt, LinearSolverSpec spec = {});
  void step();
  const VectorField& velocity() const { return vel_; }

 private:
  VectorField vel_;
  ScalarField rho_, nu_;
  VectorField zero_flux_;
  double dt_;
  LinearSolverSpec spec_, projection_spec_;
};

/// ||v(t_n)|| for n = 0..n_steps (the first entry is ||v0||).
std::vector<double> stokes_semigroup_run(const VectorField& v0, double nu, double dt, int n_steps);

}  // namespace nsf
