#include "nsf/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsf {
namespace {

void require_positive_temperature(double theta) {
  if (!(theta > 0.0)) throw std::domain_error("viscosity law needs theta > 0");
}

void require_conductivity_domain(double theta) {
  if (!(theta > -1.0)) throw std::domain_error("conductivity law needs theta > -1");
}

}  // namespace

MaterialLaw::MaterialLaw(double m, double l, double theta_min)
    : m_(m), l_(l), theta_min_(theta_min) {
  if (!(m >= 0.0) || !(l >= 0.0)) throw std::invalid_argument("material exponents must be >= 0");
  if (!(theta_min > 0.0)) throw std::invalid_argument("theta_min must be positive");
  nu_min_ = std::pow(theta_min, m);
  kappa_min_ = std::pow(1.0 + theta_min, l);
  if (nu_min_ != viscosity(theta_min, *this) || kappa_min_ != conductivity(theta_min, *this))
    throw std::logic_error("material reference values inconsistent");
}

double viscosity(double theta, const MaterialLaw& law) {
  require_positive_temperature(theta);
  return std::pow(theta, law.m());
}

double viscosity_derivative(double theta, const MaterialLaw& law) {
  require_positive_temperature(theta);
  if (law.m() == 0.0) return 0.0;
  return law.m() * std::pow(theta, law.m() - 1.0);
}

double conductivity(double theta, const MaterialLaw& law) {
  require_conductivity_domain(theta);
  return std::pow(1.0 + theta, law.l());
}

double conductivity_derivative(double theta, const MaterialLaw& law) {
  require_conductivity_domain(theta);
  if (law.l() == 0.0) return 0.0;
  return law.l() * std::pow(1.0 + theta, law.l() - 1.0);
}

ScalarField viscosity_field(const ScalarField& theta, const MaterialLaw& law) {
  ScalarField out(theta.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = viscosity(theta[k], law);
  return out;
}

ScalarField conductivity_field(const ScalarField& theta, const MaterialLaw& law) {
  ScalarField out(theta.grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = conductivity(theta[k], law);
  return out;
}

InitialDataReport validate_initial_data(const SimState& s, double m, double l, double threshold) {
  double dev = 0.0;
  for (double r : s.rho.values()) dev = std::max(dev, std::abs(r - 1.0));
  const double tmin = s.theta.min();
  return InitialDataReport{dev, tmin, threshold, dev < threshold, MaterialLaw(m, l, tmin)};
}

}  // namespace nsf
