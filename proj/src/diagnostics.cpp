#include "nsf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "nsf/heat.hpp"
#include "nsf/parallel.hpp"

namespace nsf {

EnergyLedger ledger(const SimState& s, const MaterialLaw& law) {
  const Grid& g = s.grid();
  const double A = g.cell_area();
  std::vector<double> ke(g.cells()), th(g.cells()), mod(g.cells());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double u2 = 0.5 * (s.vel.u(i, j) * s.vel.u(i, j) + s.vel.u(i + 1, j) * s.vel.u(i + 1, j));
      const double v2 = 0.5 * (s.vel.v(i, j) * s.vel.v(i, j) + s.vel.v(i, j + 1) * s.vel.v(i, j + 1));
      const std::size_t c = g.cell(i, j);
      ke[c] = 0.5 * s.rho[c] * (u2 + v2);
      th[c] = s.rho[c] * s.theta[c];
      mod[c] = s.rho[c] * (s.theta[c] - law.theta_min());
    }
  EnergyLedger e;
  e.time = s.time;
  e.mass = sum(s.rho.values()) * A;
  e.kinetic = sum(ke) * A;
  e.thermal = sum(th) * A;
  e.total = e.kinetic + e.thermal;
  e.dissipation_rate =
      sum(dissipation_density(s.vel, viscosity_field(s.theta, law), g).values()) * A;
  e.modified = sum(mod) * A + e.kinetic;
  return e;
}

double min_principle_audit(const std::vector<ScalarField>& theta_series, double theta_min) {
  std::vector<double> minima;
  minima.reserve(theta_series.size());
  for (const ScalarField& t : theta_series) minima.push_back(t.min());
  return min_principle_audit(minima, theta_min);
}

double min_principle_audit(const std::vector<double>& theta_minima, double theta_min) {
  double worst = std::numeric_limits<double>::infinity();
  for (double m : theta_minima) worst = std::min(worst, m - theta_min);
  return theta_minima.empty() ? 0.0 : worst;
}

DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& norms,
                   std::size_t begin, std::size_t end) {
  if (times.size() != norms.size()) throw std::invalid_argument("decay_fit: length mismatch");
  if (end > times.size() || begin >= end) throw std::invalid_argument("decay_fit: empty window");
  const std::size_t n = end - begin;
  std::vector<double> y(n);
  double tm = 0.0, ym = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = norms[begin + k];
    if (!(v > 0.0)) throw std::domain_error("decay_fit: non-positive norm inside the window");
    y[k] = std::log(v);
    tm += times[begin + k];
    ym += y[k];
  }
  tm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = times[begin + k] - tm;
    sxx += dx * dx;
    sxy += dx * (y[k] - ym);
  }
  DecayFit f;
  f.rate = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = ym - f.rate * tm;
  double rss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = y[k] - (f.intercept + f.rate * times[begin + k]);
    rss += r * r;
  }
  f.residual = std::sqrt(rss / n);
  f.begin = begin;
  f.end = end;
  return f;
}

DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& norms) {
  return decay_fit(times, norms, norms.size() / 2, norms.size());
}

std::size_t decay_window_end(const std::vector<double>& norms, double floor_ratio) {
  if (norms.empty()) return 0;
  const double floor = floor_ratio * norms.front();
  std::size_t end = 0;
  while (end < norms.size() && norms[end] > floor) ++end;
  return end;
}

// ---------------------------------------------------------------------------

XiProxy::XiProxy(double scale, double p) : scale_(scale), p_(p) {
  if (!(p > 1.0)) throw std::invalid_argument("xi proxy needs p > 1");
  if (!(scale > 0.0)) throw std::invalid_argument("xi proxy needs a positive scale");
}

namespace {

struct PNorms {
  double field = 0.0, hess = 0.0;  // sums of p-th powers (area weighted)
};

template <typename ArrayT>
PNorms pth_powers(const ArrayT& a, double p) {
  PNorms out;
  const double A = a.hx * a.hy;
  auto at = [&](int i, int j) { return a.data[static_cast<std::size_t>(j) * a.nx + i]; };
  for (double v : a.data) out.field += std::pow(std::abs(v), p) * A;
  const double rxx = 1.0 / (a.hx * a.hx), ryy = 1.0 / (a.hy * a.hy), rxy = 0.25 / (a.hx * a.hy);
  for (int j = 1; j < a.ny - 1; ++j)
    for (int i = 1; i < a.nx - 1; ++i) {
      const double fxx = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) * rxx;
      const double fyy = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) * ryy;
      const double fxy = (at(i + 1, j + 1) - at(i - 1, j + 1) - at(i + 1, j - 1) + at(i - 1, j - 1)) * rxy;
      out.hess += std::pow(fxx * fxx + 2.0 * fxy * fxy + fyy * fyy, 0.5 * p) * A;
    }
  return out;
}

}  // namespace

void XiProxy::add(const ScalarField& f, double t) {
  const Grid& g = f.grid();
  add_arrays({Array{std::vector<double>(f.values().begin(), f.values().end()), g.nx(), g.ny(),
                    g.hx(), g.hy()}},
             t);
}

void XiProxy::add(const VectorField& f, double t) {
  const Grid& g = f.grid();
  add_arrays({Array{f.u_values(), g.nx() + 1, g.ny(), g.hx(), g.hy()},
              Array{f.v_values(), g.nx(), g.ny() + 1, g.hx(), g.hy()}},
             t);
}

void XiProxy::add_arrays(std::vector<Array> arrays, double t) {
  if (samples_ > 0) {
    if (arrays.size() != last_.size()) throw std::invalid_argument("xi proxy: field shape changed");
    if (!(t > last_t_)) throw std::invalid_argument("xi proxy: times must increase");
  }
  PNorms tot;
  for (const Array& a : arrays) {
    const PNorms pn = pth_powers(a, p_);
    tot.field += pn.field;
    tot.hess += pn.hess;
  }
  sup_ = std::max(sup_, std::pow(tot.field, 1.0 / p_) + std::pow(tot.hess, 1.0 / p_));
  if (samples_ > 0) {
    const double dt = t - last_t_;
    double tdiff = 0.0;
    for (std::size_t c = 0; c < arrays.size(); ++c) {
      Array d = arrays[c];
      for (std::size_t k = 0; k < d.data.size(); ++k) d.data[k] = (d.data[k] - last_[c].data[k]) / dt;
      tdiff += pth_powers(d, p_).field;
    }
    integral_ += dt * (tdiff + std::pow(scale_, p_) * tot.hess);
  }
  last_ = std::move(arrays);
  last_t_ = t;
  ++samples_;
}

double XiProxy::value() const {
  return std::pow(scale_, 1.0 - 1.0 / p_) * sup_ + std::pow(integral_, 1.0 / p_);
}

double xi_proxy(const std::vector<ScalarField>& series, const std::vector<double>& times,
                double scale, double p) {
  if (series.size() != times.size()) throw std::invalid_argument("xi_proxy: length mismatch");
  XiProxy x(scale, p);
  for (std::size_t k = 0; k < series.size(); ++k) x.add(series[k], times[k]);
  return x.value();
}

double xi_proxy(const std::vector<VectorField>& series, const std::vector<double>& times,
                double scale, double p) {
  if (series.size() != times.size()) throw std::invalid_argument("xi_proxy: length mismatch");
  XiProxy x(scale, p);
  for (std::size_t k = 0; k < series.size(); ++k) x.add(series[k], times[k]);
  return x.value();
}

// ---------------------------------------------------------------------------

Smallness smallness_indicator(const SimState& s, const MaterialLaw& law, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("smallness_indicator needs p > 1");
  double nu_max = 0.0, dnu_max = 0.0, dkappa_max = 0.0, dev_nu = 0.0, dev_kappa = 0.0;
  for (double th : s.theta.values()) {
    const double nu = viscosity(th, law), kappa = conductivity(th, law);
    nu_max = std::max(nu_max, nu);
    dnu_max = std::max(dnu_max, std::abs(viscosity_derivative(th, law)));
    dkappa_max = std::max(dkappa_max, std::abs(conductivity_derivative(th, law)));
    dev_nu = std::max(dev_nu, std::abs(nu - law.nu_min()));
    dev_kappa = std::max(dev_kappa, std::abs(kappa - law.kappa_min()));
  }
  const double nu0 = law.nu_min(), k0 = law.kappa_min();
  Smallness out;
  out.terms[0] = std::pow(nu0, -2.0 + 1.0 / p);
  out.terms[1] = dnu_max / (nu0 * std::pow(k0, 1.0 - 1.0 / p));
  out.terms[2] = nu_max / (nu0 * nu0);
  out.terms[3] = std::pow(nu0, -1.0 + 1.0 / p) / k0;
  out.terms[4] = dkappa_max / std::pow(k0, 2.0 - 4.0 / p);
  out.K = *std::max_element(std::begin(out.terms), std::end(out.terms));
  out.ratio_nu = dev_nu / nu0;
  out.ratio_kappa = dev_kappa / k0;
  return out;
}

double density_gradient_norm(const ScalarField& rho, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("density_gradient_norm needs p >= 1");
  const Grid& g = rho.grid();
  const int nx = g.nx(), ny = g.ny();
  double acc = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int il = std::max(i - 1, 0), ir = std::min(i + 1, nx - 1);
      const int jl = std::max(j - 1, 0), jr = std::min(j + 1, ny - 1);
      const double gx = (rho(ir, j) - rho(il, j)) / ((ir - il) * g.hx());
      const double gy = (rho(i, jr) - rho(i, jl)) / ((jr - jl) * g.hy());
      acc += std::pow(gx * gx + gy * gy, 0.5 * p);
    }
  return std::pow(acc * g.cell_area(), 1.0 / p);
}

double density_deviation(const ScalarField& rho) {
  double dev = 0.0;
  for (double r : rho.values()) dev = std::max(dev, std::abs(r - 1.0));
  return dev;
}

// ---------------------------------------------------------------------------

ThetaTildeTracker::ThetaTildeTracker(const SimState& s0, double theta_min) : theta_min_(theta_min) {
  const double A = s0.grid().cell_area();
  mass_ = sum(s0.rho.values()) * A;
  std::vector<double> e(s0.rho.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = s0.rho[k] * (s0.theta[k] - theta_min);
  base_ = sum(e) * A;
}

ThetaTildeTracker::Residual ThetaTildeTracker::residual(const SimState& s) const {
  const double tt = value();
  ScalarField d(s.grid());
  std::vector<double> w(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = s.theta[k] - theta_min_ - tt;
    w[k] = s.rho[k] * d[k];
  }
  return Residual{sum(w) * s.grid().cell_area(), l2_norm(d)};
}

std::vector<ThetaTildePoint> theta_tilde_track(const std::vector<EnergyLedger>& rows,
                                               const SimState& initial,
                                               const std::vector<SimState>& snapshots,
                                               double theta_min) {
  ThetaTildeTracker tr(initial, theta_min);
  std::vector<ThetaTildePoint> out;
  std::size_t snap = 0;
  double t_prev = initial.time;
  for (const EnergyLedger& r : rows) {
    if (r.time > t_prev) tr.add_heat((r.time - t_prev) * r.dissipation_rate);
    t_prev = std::max(t_prev, r.time);
    while (snap < snapshots.size() && std::abs(snapshots[snap].time - r.time) <= 1e-12 * (1.0 + r.time)) {
      const auto res = tr.residual(snapshots[snap]);
      out.push_back({r.time, tr.value(), res.weighted_mean, res.l2});
      ++snap;
    }
  }
  return out;
}

void write_csv_header(std::ostream& os, const std::vector<const char*>& columns) {
  for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
  os << '\n';
}

void write_csv_row(std::ostream& os, const std::vector<double>& values) {
  const auto old = os.precision(17);
  for (std::size_t k = 0; k < values.size(); ++k) os << (k ? "," : "") << values[k];
  os << '\n';
  os.precision(old);
}

}  // namespace nsf
