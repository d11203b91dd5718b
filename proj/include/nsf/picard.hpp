#pragma once

#include <stdexcept>
#include <vector>

#include "nsf/linear_solver.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// Optional external sources, used by the manufactured-solution tests.
/// With balance_heat the cell mean of the total heat source is removed in
/// every sweep, so that insulated steady states exist.
struct Forcing {
  const VectorField* body = nullptr;
  const ScalarField* heat = nullptr;
  bool balance_heat = false;
};

struct PicardOptions {
  double tol = 1e-8;  ///< on the largest relative L2 change between sweeps
  int max_sweeps = 50;
  /// A step that fails to converge is retried as two half steps, recursively,
  /// down to dt / 2^max_halvings.
  int max_halvings = 6;
  LinearSolverSpec momentum{LinearSolverSpec::Method::bicgstab, 1e-10, 2000};
  LinearSolverSpec projection{LinearSolverSpec::Method::conjugate_gradient, 1e-12, 2000};
  LinearSolverSpec heat{LinearSolverSpec::Method::bicgstab, 1e-10, 2000};
  Forcing forcing;

  void validate() const;
};

struct IterationReport {
  int sweeps = 0;
  std::vector<double> delta_rho, delta_v, delta_theta;  ///< relative, one entry per sweep
  std::vector<double> contraction_ratios;  ///< combined delta of sweep k over sweep k-1
  bool converged = false;

  double dt = 0.0;     ///< step length taken (sum over sub-steps after halving)
  int substeps = 1;
  /// Kinetic energy handed to viscosity, dt * Phi(v*), evaluated through the
  /// viscous operator, and the heat actually deposited, dt * sum(q) hx hy,
  /// evaluated from the cellwise density. Summed over sub-steps.
  double viscous_work = 0.0;
  double heat_input = 0.0;
};

class StepRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepResult {
  SimState state;
  IterationReport report;
};

/// One time step of the successive-approximation scheme. Sweep k transports
/// the density with v^{k-1}, solves momentum with coefficients from
/// (theta^{k-1}, v^{k-1}) and projects with rho^k, then solves heat with the
/// dissipation of the momentum solution as source. Sweep 0 is the old level.
/// Halves dt on failure; throws StepRejected below the floor.
StepResult advance(const SimState& s, double dt, const MaterialLaw& law,
                   const PicardOptions& opt = {});
StepResult advance(const SimState& s, double dt, const MaterialLaw& law, double tol,
                   int max_sweeps);

/// Single attempt without dt halving; report.converged tells the outcome.
StepResult advance_once(const SimState& s, double dt, const MaterialLaw& law,
                        const PicardOptions& opt);

/// Largest consecutive ratio of combined deltas. Ratios whose numerator lies
/// below `noise_floor` are ignored (they measure linear-solver noise rather
/// than the fixed-point map). Needs at least three sweeps.
double contraction_certificate(const IterationReport& r, double noise_floor = 0.0);

}  // namespace nsf
