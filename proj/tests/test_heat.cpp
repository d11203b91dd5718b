#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsf/diagnostics.hpp"
#include "nsf/heat.hpp"
#include "nsf/momentum.hpp"
#include "nsf/parallel.hpp"
#include "nsf/transport.hpp"
#include "support.hpp"

using namespace nsf;
using namespace nsf::test;
using std::numbers::pi;

namespace {

const LinearSolverSpec kHeat{LinearSolverSpec::Method::bicgstab, 1e-12, 2000};

struct Setup {
  Grid g;
  ScalarField rho, rho_next, kappa;
  VectorField flux;
  double dt;
};

Setup random_setup(Rng& r) {
  const Grid g = random_grid(r, 6, 18);
  const ScalarField rho = random_scalar(g, r, 0.8, 1.2);
  const VectorField adv = random_solenoidal(g, r, 1.0);
  const double dt = r.uniform(0.1, 0.9) / std::max(courant_number(adv, 1.0, g), 1e-12);
  return {g, rho, transport_density(rho, adv, dt, g), random_scalar(g, r, 0.2, 5.0),
          mass_flux(rho, adv, g), dt};
}

}  // namespace

TEST_CASE("uniform temperature without a source is a fixed point") {
  Rng r(61);
  for (int t = 0; t < kTrials; ++t) {
    const Setup s = random_setup(r);
    const double c = r.uniform(1.0, 50.0);
    const ScalarField th = heat_solve(ScalarField(s.g, c), s.rho, s.rho_next, s.flux, s.kappa,
                                      ScalarField(s.g), s.dt, kHeat);
    for (double x : th.values()) CHECK(x == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("property: a non-negative source never lowers the minimum") {
  Rng r(62);
  for (int t = 0; t < kTrials; ++t) {
    const Setup s = random_setup(r);
    const ScalarField th0 = random_scalar(s.g, r, 5.0, 8.0);
    const ScalarField q = random_scalar(s.g, r, 0.0, 3.0);
    const ScalarField th = heat_solve(th0, s.rho, s.rho_next, s.flux, s.kappa, q, s.dt, kHeat);
    CHECK(th.min() >= th0.min() - 1e-10);
  }
}

TEST_CASE("property: thermal energy changes by exactly the deposited heat") {
  Rng r(63);
  for (int t = 0; t < kTrials; ++t) {
    const Setup s = random_setup(r);
    const ScalarField th0 = random_scalar(s.g, r, 1.0, 3.0);
    const ScalarField q = random_scalar(s.g, r, 0.0, 2.0);
    const ScalarField th = heat_solve(th0, s.rho, s.rho_next, s.flux, s.kappa, q, s.dt, kHeat);
    const double before = dot(s.rho.values(), th0.values());
    const double after = dot(s.rho_next.values(), th.values());
    CHECK(after - before == doctest::Approx(s.dt * sum(q.values())).epsilon(1e-10));
  }
}

TEST_CASE("property: insulated and at rest, sum(rho theta) is conserved") {
  Rng r(64);
  for (int t = 0; t < kTrials; ++t) {
    const Grid g = random_grid(r, 6, 18);
    const ScalarField rho = random_scalar(g, r, 0.8, 1.2);
    const ScalarField th0 = random_scalar(g, r, 1.0, 3.0);
    const ScalarField th = heat_solve(th0, rho, rho, VectorField(g), random_scalar(g, r, 0.2, 5.0),
                                      ScalarField(g), r.uniform(1e-3, 1.0), kHeat);
    CHECK(dot(rho.values(), th.values()) == doctest::Approx(dot(rho.values(), th0.values())).epsilon(1e-13));
  }
}

TEST_CASE("steady manufactured temperature converges at second order") {
  // theta = cos(pi x) cos(pi y), kappa = 2 + x; the source is the
  // hand-differentiated -div(kappa grad theta), which integrates to zero.
  auto th = [](double x, double y) { return std::cos(pi * x) * std::cos(pi * y); };
  auto q = [](double x, double y) {
    return pi * std::sin(pi * x) * std::cos(pi * y) + (2.0 + x) * 2 * pi * pi * std::cos(pi * x) * std::cos(pi * y);
  };
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const Grid g(n, n, 1.0, 1.0);
    ScalarField src = sample(g, q);
    const double avg = mean(src);
    for (double& x : src.values()) x -= avg;
    const ScalarField exact = sample(g, th);
    const ScalarField out = heat_solve(exact, ScalarField(g, 1.0), ScalarField(g, 1.0), VectorField(g),
                                       sample(g, [](double x, double) { return 2.0 + x; }), src, 1e6, kHeat);
    double err = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) err = std::max(err, std::abs(out[k] - exact[k]));
    if (prev > 0.0) CHECK(order(prev, err) > 1.8);
    prev = err;
  }
}

TEST_CASE("heat semigroup") {
  const Grid g(20, 16, 2.0, 1.0);
  const HeatSeries z = heat_semigroup_run(ScalarField(g), 1.0, 0.01, 5);
  for (double x : z.l2) CHECK(x == 0.0);

  const HeatSeries c = heat_semigroup_run(ScalarField(g, 2.5), 1.0, 0.01, 10);
  for (std::size_t k = 0; k < c.l2.size(); ++k) {
    CHECK(c.mean[k] == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(c.l2[k] == doctest::Approx(c.l2[0]).epsilon(1e-13));
  }

  // Smooth mean-free data: the slowest cosine modes dominate the fit.
  ScalarField e0 = sample(g, [](double x, double y) {
    return std::cos(pi * x / 2.0) + 0.3 * std::cos(pi * y) + 0.1 * std::cos(pi * x) * std::cos(pi * y);
  });
  const HeatSeries a = heat_semigroup_run(e0, 0.1, 0.01, 60);
  const HeatSeries b = heat_semigroup_run(e0, 0.2, 0.01, 60);
  for (std::size_t k = 1; k < a.l2.size(); ++k) {
    CHECK(a.l2[k] < a.l2[k - 1]);
    CHECK(std::abs(a.mean[k]) < 1e-14);
  }
  std::vector<double> times(a.l2.size());
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = 0.01 * k;
  const double ratio = decay_fit(times, b.l2).rate / decay_fit(times, a.l2).rate;
  CHECK(ratio >= 1.6);
  CHECK(ratio <= 2.4);
}

TEST_CASE("heat step takes its source from the lagged dissipation") {
  const Grid g(12, 12, 1.0, 1.0);
  Rng r(66);
  SimState s(g);
  s.theta = random_scalar(g, r, 2.0, 3.0);
  const MaterialLaw law(1.0, 1.0, 2.0);
  const VectorField w = random_solenoidal(g, r, 0.5);
  const ScalarField th = heat_step(s, VectorField(g), s.theta, w, 0.01, law, kHeat);
  const double deposited = viscous_work(w, viscosity_field(s.theta, law), g).total;
  const double gain = (dot(s.rho.values(), th.values()) - dot(s.rho.values(), s.theta.values())) * g.cell_area();
  CHECK(gain == doctest::Approx(0.01 * deposited).epsilon(1e-10));
  CHECK(th.min() >= s.theta.min());
}
