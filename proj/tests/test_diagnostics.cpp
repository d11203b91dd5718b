#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/heat.hpp"
#include "nsf/momentum.hpp"
#include "nsf/scenarios.hpp"
#include "nsf/simulation.hpp"
#include "nsf/transport.hpp"
#include "support.hpp"

using namespace nsf;
using namespace nsf::test;
using std::numbers::pi;

namespace {

RunConfig short_run(const std::string& scenario) {
  RunConfig c;
  c.nx = c.ny = 24;
  c.dt = 2e-3;
  c.t_end = 0.1;
  c.scenario = scenario;
  return c;
}

}  // namespace

TEST_CASE("ledger examples") {
  const Grid g(10, 10, 1.0, 1.0);
  SimState s(g);
  s.theta = ScalarField(g, 4.0);
  const MaterialLaw law(1.0, 1.0, 4.0);
  const EnergyLedger e = ledger(s, law);
  CHECK(e.mass == doctest::Approx(1.0));
  CHECK(e.kinetic == 0.0);
  CHECK(e.thermal == doctest::Approx(4.0));
  CHECK(e.total == e.kinetic + e.thermal);
  CHECK(e.modified == doctest::Approx(0.0).scale(1.0));
  CHECK(e.dissipation_rate == 0.0);
}

TEST_CASE("property: kinetic energy is the face sum with mean face densities") {
  Rng r(71);
  for (int t = 0; t < kTrials; ++t) {
    const Grid g = random_grid(r);
    SimState s(g);
    s.rho = random_scalar(g, r, 0.5, 1.5);
    s.vel = random_vector(g, r, 1.0);
    s.theta = random_scalar(g, r, 1.0, 2.0);
    const VectorField rf = face_density(s.rho);
    double face = 0.0;
    for (std::size_t k = 0; k < rf.u_values().size(); ++k)
      face += 0.5 * rf.u_values()[k] * s.vel.u_values()[k] * s.vel.u_values()[k];
    for (std::size_t k = 0; k < rf.v_values().size(); ++k)
      face += 0.5 * rf.v_values()[k] * s.vel.v_values()[k] * s.vel.v_values()[k];
    const EnergyLedger e = ledger(s, MaterialLaw(1.0, 1.0, 1.0));
    CHECK(e.kinetic == doctest::Approx(face * g.cell_area()).epsilon(1e-12));
    CHECK(e.total == e.kinetic + e.thermal);
    CHECK(e.dissipation_rate >= 0.0);
  }
}

TEST_CASE("minimum principle audit") {
  const Grid g(6, 6, 1.0, 1.0);
  CHECK(min_principle_audit(std::vector<ScalarField>{ScalarField(g, 3.0), ScalarField(g, 3.0)}, 3.0) == 0.0);
  ScalarField bump(g, 3.0);
  for (int i = 0; i < 6; ++i) bump(i, 2) += 0.5;
  for (double& x : bump.values()) x += 0.01;
  CHECK(min_principle_audit(std::vector<ScalarField>{bump}, 3.0) == doctest::Approx(0.01));
  CHECK(min_principle_audit(std::vector<double>{3.2, 2.9, 3.1}, 3.0) == doctest::Approx(-0.1));
}

TEST_CASE("decay fit examples") {
  std::vector<double> t, n, flat;
  for (int k = 0; k <= 50; ++k) {
    t.push_back(0.02 * k);
    n.push_back(std::exp(-2.0 * t.back()));
    flat.push_back(0.7);
  }
  const DecayFit f = decay_fit(t, n);
  CHECK(f.decay_constant() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f.rate == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(f.residual < 1e-10);
  CHECK(f.begin == 25);
  CHECK(f.end == 51);
  CHECK(decay_fit(t, flat).rate == doctest::Approx(0.0).scale(1.0));

  n[40] = 0.0;
  CHECK_THROWS_AS(decay_fit(t, n), std::domain_error);
  CHECK(decay_window_end(n, 1e-300) == 40);
  CHECK_NOTHROW(decay_fit(t, n, 0, decay_window_end(n, 1e-300)));
}

TEST_CASE("xi proxy examples") {
  const Grid g(16, 16, 1.0, 1.0);
  XiProxy zero(2.0, 8.0);
  for (int k = 0; k < 4; ++k) zero.add(ScalarField(g), 0.1 * k);
  CHECK(zero.value() == 0.0);

  Rng r(72);
  std::vector<ScalarField> series;
  std::vector<VectorField> vseries;
  std::vector<double> times;
  for (int k = 0; k < 5; ++k) {
    series.push_back(random_scalar(g, r, -1, 1));
    vseries.push_back(random_vector(g, r, 1.0));
    times.push_back(0.05 * k);
  }
  const double base = xi_proxy(series, times, 3.0, 8.0);
  const double vbase = xi_proxy(vseries, times, 3.0, 8.0);
  for (double lam : {0.5, 2.0, 7.0}) {
    std::vector<ScalarField> scaled = series;
    for (auto& f : scaled)
      for (double& x : f.values()) x *= lam;
    CHECK(xi_proxy(scaled, times, 3.0, 8.0) == doctest::Approx(lam * base).epsilon(1e-12));
    std::vector<VectorField> vs = vseries;
    for (auto& f : vs) {
      for (double& x : f.u_values()) x *= lam;
      for (double& x : f.v_values()) x *= lam;
    }
    CHECK(xi_proxy(vs, times, 3.0, 8.0) == doctest::Approx(lam * vbase).epsilon(1e-12));
  }
  CHECK_THROWS(XiProxy(1.0, 1.0));
}

TEST_CASE("smallness indicator examples") {
  const Grid g(8, 8, 1.0, 1.0);
  SimState s(g);
  s.theta = ScalarField(g, 1.0);
  const Smallness k = smallness_indicator(s, MaterialLaw(1.0, 0.0, 1.0), 8.0);
  const double expect[5] = {1.0, 1.0, 1.0, 1.0, 0.0};
  for (int i = 0; i < 5; ++i) CHECK(k.terms[i] == doctest::Approx(expect[i]));
  CHECK(k.K == doctest::Approx(1.0));
  CHECK(k.ratio_nu == 0.0);
  CHECK(k.ratio_kappa == 0.0);

  s.theta = ScalarField(g, 10.0);
  const Smallness flat = smallness_indicator(s, MaterialLaw(1.0, 1.0, 10.0), 8.0);
  CHECK(flat.ratio_nu == 0.0);
  CHECK(flat.ratio_kappa == 0.0);
}

TEST_CASE("property: K decreases when the floor doubles at fixed data") {
  Rng r(73);
  for (int t = 0; t < kTrials; ++t) {
    const Grid g(8, 8, 1.0, 1.0);
    const double floor = r.uniform(0.5, 50.0);
    const ScalarField bump = random_scalar(g, r, 0.0, 1.0);
    double prev = INFINITY;
    for (double f : {floor, 2 * floor, 4 * floor}) {
      SimState s(g);
      s.theta = bump;
      for (double& x : s.theta.values()) x += f;
      const Smallness k = smallness_indicator(s, MaterialLaw(1.0, 0.0, f), 8.0);
      CHECK(k.K < prev);
      prev = k.K;
    }
  }
}

TEST_CASE("density gradient norm") {
  const Grid g(16, 16, 2.0, 1.0);
  CHECK(density_gradient_norm(ScalarField(g, 1.0), 8.0) == 0.0);

  // rho = 1 + eps sin(2 pi x/lx): the norm is eps (2 pi/lx) (mean |cos|^p)^(1/p) |Omega|^(1/p).
  const double eps = 0.05, lx = 2.0, ly = 1.0;
  for (double p : {2.0, 8.0}) {
    // Independent quadrature of mean |cos|^p.
    const int m = 200000;
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += std::pow(std::abs(std::cos(2 * pi * (k + 0.5) / m)), p);
    const double exact = eps * 2 * pi / lx * std::pow(acc / m, 1.0 / p) * std::pow(lx * ly, 1.0 / p);
    const Grid fine(256, 64, lx, ly);
    const double got = density_gradient_norm(
        sample(fine, [&](double x, double) { return 1.0 + eps * std::sin(2 * pi * x / lx); }), p);
    CHECK(got == doctest::Approx(exact).epsilon(2e-3));
  }
}

TEST_CASE("theta tilde is constant without motion") {
  RunConfig c = short_run("rest");
  const SimState s0 = initial_state(c);
  const MaterialLaw law = c.law(s0.theta.min());
  const RunResult res = simulate(c, s0, law);
  std::vector<EnergyLedger> rows;
  for (const LedgerRow& r : res.rows) rows.push_back(r.energy);
  const std::vector<ThetaTildePoint> pts = theta_tilde_track(rows, s0, {s0, res.final_state}, law.theta_min());
  REQUIRE(pts.size() == 2);
  const ThetaTildeTracker tr(s0, law.theta_min());
  CHECK(pts[0].theta_tilde == doctest::Approx(tr.value()));
  CHECK(pts[1].theta_tilde == pts[0].theta_tilde);
  for (const auto& p : pts) CHECK(std::abs(p.weighted_mean) <= 1e-8 * tr.mass());
}

TEST_CASE("split with fluid at rest and a uniform excess temperature") {
  const Grid g(16, 16, 1.0, 1.0);
  const double c = 0.7, floor = 2.0, dt = 0.01;
  const std::vector<double> s = stokes_semigroup_run(VectorField(g), 1.0, dt, 10);
  for (double x : s) CHECK(x == 0.0);
  const HeatSeries e = heat_semigroup_run(ScalarField(g, c), 3.0, dt, 10);
  for (double m : e.mean) CHECK(m == doctest::Approx(c).epsilon(1e-14));

  // N = v - S = v and H = theta - floor - E = theta - floor - c.
  SimState st(g);
  st.theta = ScalarField(g, floor + c);
  const StepResult r = advance(st, dt, MaterialLaw(1.0, 1.0, floor), 1e-8, 50);
  for (double x : r.state.theta.values()) CHECK(x - floor - c == doctest::Approx(0.0).scale(1.0));
  CHECK(l2_norm(r.state.vel) == 0.0);
}

TEST_CASE("run-level monotonicity and decay on the shipped moving scenarios") {
  for (const char* name : {"pudding", "random"}) {
    CAPTURE(name);
    const RunConfig c = short_run(name);
    const SimState s0 = initial_state(c);
    const MaterialLaw law = c.law(s0.theta.min());
    const RunResult res = simulate(c, s0, law);
    std::vector<double> times, norms;
    double excess_prev = -INFINITY;
    for (std::size_t k = 0; k < res.rows.size(); ++k) {
      const EnergyLedger& e = res.rows[k].energy;
      if (k > 0) CHECK(e.kinetic <= res.rows[k - 1].energy.kinetic);
      const double excess = e.modified - e.kinetic;  // sum rho (theta - floor)
      CHECK(excess >= excess_prev - 1e-12 * std::abs(excess));
      excess_prev = excess;
      CHECK(res.rows[k].min_theta >= law.theta_min() - 1e-9);
      times.push_back(e.time);
      norms.push_back(std::sqrt(e.kinetic));
    }
    CHECK(decay_fit(times, norms).rate < 0.0);
  }
}

TEST_CASE("csv helpers") {
  std::ostringstream os;
  write_csv_header(os, {"a", "b"});
  write_csv_row(os, {0.1, 2.0});
  CHECK(os.str() == "a,b\n0.10000000000000001,2\n");
}
