#pragma once

#include <memory>
#include <vector>

#include "nsf/grid.hpp"
#include "nsf/linear_solver.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// Implicit temperature step with frozen coefficients,
///   rho_n (th - theta_n)/dt + A_F(th) - div(kappa grad th) = q,
/// insulated walls. The matrix is an M-matrix with positive row sums.
///
/// After the solve the result is shifted by a constant so that
///   sum(rho_next th) - sum(rho_n theta_n) = dt sum(q)
/// holds to round-off; rho_next must be the transported density
/// rho_n - dt div(flux). The shift is of the order of the solver residual.
ScalarField heat_solve(const ScalarField& theta_n, const ScalarField& rho_n,
                       const ScalarField& rho_next, const VectorField& flux,
                       const ScalarField& kappa, const ScalarField& q, double dt,
                       const LinearSolverSpec& spec, SolveStats* stats = nullptr);

/// heat_solve with the flux from s.rho and lag_vel, kappa = kappa(lag_theta)
/// and source q = viscous dissipation of new_vel with nu(lag_theta). An extra
/// source (e.g. a manufactured forcing) may be added.
ScalarField heat_step(const SimState& s, const VectorField& lag_vel, const ScalarField& lag_theta,
                      const VectorField& new_vel, double dt, const MaterialLaw& law,
                      const LinearSolverSpec& spec, const ScalarField* extra_source = nullptr);

/// Constant-coefficient insulated heat flow E_t = kappa Lap E, implicit Euler,
/// solved exactly in the cosine basis.
class HeatSemigroup {
 public:
  HeatSemigroup(const ScalarField& e0, double kappa, double dt);
  ~HeatSemigroup();
  HeatSemigroup(const HeatSemigroup&) = delete;
  HeatSemigroup& operator=(const HeatSemigroup&) = delete;
  void step();
  const ScalarField& field() const { return e_; }

 private:
  ScalarField e_;
  double dt_;
  struct Solver;
  std::unique_ptr<Solver> solver_;
};

struct HeatSeries {
  std::vector<double> l2;    ///< ||E(t_n)||, n = 0..n_steps
  std::vector<double> mean;  ///< spatial mean of E(t_n)
};

HeatSeries heat_semigroup_run(const ScalarField& e0, double kappa, double dt, int n_steps);

/// sqrt(sum_cells s^2 hx hy).
double l2_norm(const ScalarField& s);
double mean(const ScalarField& s);

}  // namespace nsf
