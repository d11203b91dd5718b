#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsf/state.hpp"
#include "support.hpp"

using namespace nsf;
using namespace nsf::test;

TEST_CASE("viscosity law") {
  for (double m : {0.0, 0.5, 1.0, 3.0}) CHECK(viscosity(1.0, MaterialLaw(m, 1.0, 1.0)) == 1.0);
  const MaterialLaw cubic(3.0, 1.0, 0.5);
  CHECK(viscosity(2.0, cubic) == doctest::Approx(8.0));
  CHECK(viscosity_derivative(2.0, cubic) == doctest::Approx(12.0));
  CHECK(viscosity(cubic.theta_min(), cubic) == cubic.nu_min());
  const MaterialLaw lin(1.0, 0.0, 2.0);
  for (double th : {0.1, 1.0, 7.5}) CHECK(viscosity_derivative(th, lin) == 1.0);
  CHECK_THROWS_AS(viscosity(0.0, lin), std::domain_error);
  CHECK_THROWS_AS(viscosity_derivative(-1.0, lin), std::domain_error);
}

TEST_CASE("conductivity law") {
  const MaterialLaw flat(1.0, 0.0, 1.0);
  for (double th : {0.0, 2.0, 50.0}) CHECK(conductivity(th, flat) == 1.0);
  CHECK(conductivity_derivative(3.0, flat) == 0.0);
  const MaterialLaw sq(1.0, 2.0, 1.0);
  CHECK(conductivity(3.0, sq) == doctest::Approx(16.0));
  CHECK(conductivity_derivative(3.0, sq) == doctest::Approx(8.0));
  CHECK(conductivity(0.0, MaterialLaw(1.0, 1.0, 1.0)) == 1.0);
  CHECK_THROWS_AS(conductivity(-1.0, sq), std::domain_error);
}

TEST_CASE("reference values at the temperature floor") {
  const MaterialLaw law(1.5, 2.0, 4.0);
  CHECK(law.nu_min() == viscosity(4.0, law));
  CHECK(law.kappa_min() == conductivity(4.0, law));
  CHECK(law.kappa_min() == doctest::Approx(25.0));
  CHECK_THROWS(MaterialLaw(1.0, 1.0, 0.0));
  CHECK_THROWS(MaterialLaw(-1.0, 1.0, 1.0));
}

TEST_CASE("derivatives match central differences") {
  Rng r(21);
  for (int t = 0; t < kTrials; ++t) {
    const MaterialLaw law(r.uniform(0.0, 4.0), r.uniform(0.0, 4.0), 1.0);
    const double th = r.uniform(0.5, 20.0);
    double prev = 0.0;
    for (double h : {1e-2, 5e-3}) {
      const double fd = (viscosity(th + h, law) - viscosity(th - h, law)) / (2 * h);
      const double err = std::abs(fd - viscosity_derivative(th, law));
      CHECK(err <= 1e-3 * (1.0 + std::abs(viscosity_derivative(th, law))));
      const double kfd = (conductivity(th + h, law) - conductivity(th - h, law)) / (2 * h);
      CHECK(std::abs(kfd - conductivity_derivative(th, law)) <=
            1e-3 * (1.0 + std::abs(conductivity_derivative(th, law))));
      if (prev > 1e-9 && err > 1e-9) CHECK(prev / err > 3.0);  // O(h^2)
      prev = err;
    }
  }
}

TEST_CASE("property: laws are nondecreasing and bounded below by their floor values") {
  Rng r(22);
  for (int t = 0; t < kTrials; ++t) {
    const MaterialLaw law(r.uniform(0.0, 3.0), r.uniform(0.0, 3.0), r.uniform(0.1, 20.0));
    double th = law.theta_min();
    double nu_prev = viscosity(th, law), k_prev = conductivity(th, law);
    for (int k = 0; k < 50; ++k) {
      th += r.uniform(0.0, 1.0);
      const double nu = viscosity(th, law), kap = conductivity(th, law);
      CHECK(nu >= nu_prev);
      CHECK(kap >= k_prev);
      CHECK(nu >= law.nu_min());
      CHECK(kap >= law.kappa_min());
      nu_prev = nu;
      k_prev = kap;
    }
  }
}

TEST_CASE("initial data validation") {
  const Grid g(16, 16, 1.0, 1.0);
  SimState s(g);
  s.theta = ScalarField(g, 3.0);
  const InitialDataReport flat = validate_initial_data(s, 1.0, 1.0, 1e-9);
  CHECK(flat.density_deviation == 0.0);
  CHECK(flat.density_small);

  s.rho = sample(g, [](double x, double y) {
    return 1.0 + 0.05 * std::sin(2 * std::numbers::pi * x) * std::sin(std::numbers::pi * y);
  });
  const InitialDataReport bumpy = validate_initial_data(s, 1.0, 1.0, 0.025);
  CHECK_FALSE(bumpy.density_small);
  CHECK(bumpy.density_deviation == doctest::Approx(0.05).epsilon(0.02));

  // theta0 = 10 + non-negative perturbation vanishing at one cell.
  Rng r(23);
  s.theta = random_scalar(g, r, 10.0, 12.0);
  s.theta(3, 7) = 10.0;
  const InitialDataReport th = validate_initial_data(s, 1.0, 1.0, 0.1);
  CHECK(th.theta_min == 10.0);
  CHECK(th.law.theta_min() == 10.0);
  CHECK(th.law.nu_min() == 10.0);
  CHECK(th.law.kappa_min() == 11.0);
}

TEST_CASE("field evaluations") {
  const Grid g(5, 5, 1.0, 1.0);
  Rng r(24);
  const ScalarField th = random_scalar(g, r, 1.0, 4.0);
  const MaterialLaw law(2.0, 1.0, 1.0);
  const ScalarField nu = viscosity_field(th, law), ka = conductivity_field(th, law);
  for (std::size_t k = 0; k < th.size(); ++k) {
    CHECK(nu[k] == std::pow(th[k], 2.0));
    CHECK(ka[k] == 1.0 + th[k]);
  }
}
