#pragma once

#include "nsf/grid.hpp"

namespace nsf {

/// Power-law viscosity nu(theta) = theta^m and conductivity
/// kappa(theta) = (1+theta)^l, with their values at the temperature floor.
class MaterialLaw {
 public:
  MaterialLaw(double m, double l, double theta_min);

  double m() const { return m_; }
  double l() const { return l_; }
  double theta_min() const { return theta_min_; }
  double nu_min() const { return nu_min_; }
  double kappa_min() const { return kappa_min_; }

 private:
  double m_, l_, theta_min_, nu_min_, kappa_min_;
};

double viscosity(double theta, const MaterialLaw& law);
double viscosity_derivative(double theta, const MaterialLaw& law);
double conductivity(double theta, const MaterialLaw& law);
double conductivity_derivative(double theta, const MaterialLaw& law);

ScalarField viscosity_field(const ScalarField& theta, const MaterialLaw& law);
ScalarField conductivity_field(const ScalarField& theta, const MaterialLaw& law);

struct SimState {
  ScalarField rho;
  VectorField vel;
  ScalarField theta;
  ScalarField pi;
  double time = 0.0;

  explicit SimState(const Grid& g) : rho(g, 1.0), vel(g), theta(g, 1.0), pi(g), time(0.0) {}
  const Grid& grid() const { return rho.grid(); }
};

struct InitialDataReport {
  double density_deviation = 0.0;  ///< max |rho0 - 1|
  double theta_min = 0.0;          ///< min theta0
  double threshold = 0.0;
  bool density_small = false;      ///< density_deviation < threshold
  MaterialLaw law;
};

/// Reports the density perturbation against `threshold` and builds the law
/// with theta_min = min theta0. Never throws on a failed smallness check.
InitialDataReport validate_initial_data(const SimState& s, double m, double l, double threshold);

}  // namespace nsf
