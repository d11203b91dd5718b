#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "nsf/grid.hpp"
#include "nsf/state.hpp"

namespace nsf {

struct EnergyLedger {
  double time = 0.0;
  double mass = 0.0;
  double kinetic = 0.0;
  double thermal = 0.0;
  double total = 0.0;
  double dissipation_rate = 0.0;
  double modified = 0.0;
};

/// Integrals of one state. Kinetic energy averages the squared face
/// velocities to cell centres, which equals sum_faces 1/2 rho_f w^2 hx hy
/// with rho_f the face mean. The dissipation rate is Phi(vel) with
/// nu = nu(theta).
EnergyLedger ledger(const SimState& s, const MaterialLaw& law);

/// min over the series of (min theta - theta_min).
double min_principle_audit(const std::vector<ScalarField>& theta_series, double theta_min);
double min_principle_audit(const std::vector<double>& theta_minima, double theta_min);

struct DecayFit {
  double rate = 0.0;       ///< slope of log(norm) against time; negative for decay
  double intercept = 0.0;  ///< log(norm) at t = 0
  double residual = 0.0;   ///< root-mean-square log residual
  std::size_t begin = 0, end = 0;  ///< window [begin, end)

  /// e-folding rate of a decaying series, -rate.
  double decay_constant() const { return -rate; }
};

/// Least-squares line through (t, log norm) on [begin, end). Throws
/// std::domain_error on a non-positive norm inside the window.
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& norms,
                   std::size_t begin, std::size_t end);
/// Second half of the series.
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& norms);

/// Largest window end such that norms stay above floor_ratio * norms[0].
std::size_t decay_window_end(const std::vector<double>& norms, double floor_ratio);

/// Streaming discrete proxy for the maximal-regularity norm of a time series
/// of grid functions:
///   scale^(1-1/p) sup_t (|f|_p + |D2 f|_p)
///     + ( sum_n dt_n (|(f_n - f_{n-1})/dt_n|_p^p + |scale D2 f_n|_p^p) )^(1/p)
/// where D2 is the five-point Hessian on interior points and |.|_p the
/// area-weighted l^p norm. Vector fields contribute both face arrays.
class XiProxy {
 public:
  XiProxy(double scale, double p);

  void add(const ScalarField& f, double t);
  void add(const VectorField& f, double t);
  double value() const;
  std::size_t samples() const { return samples_; }

 private:
  struct Array {
    std::vector<double> data;
    int nx, ny;
    double hx, hy;
  };
  void add_arrays(std::vector<Array> arrays, double t);

  double scale_, p_;
  std::size_t samples_ = 0;
  double last_t_ = 0.0;
  std::vector<Array> last_;
  double sup_ = 0.0;
  double integral_ = 0.0;
};

/// One-shot proxy of a stored series.
double xi_proxy(const std::vector<ScalarField>& series, const std::vector<double>& times,
                double scale, double p);
double xi_proxy(const std::vector<VectorField>& series, const std::vector<double>& times,
                double scale, double p);

struct Smallness {
  double terms[5] = {0, 0, 0, 0, 0};
  double K = 0.0;               ///< max of the five terms
  double ratio_nu = 0.0;        ///< max |nu(theta) - nu_min| / nu_min
  double ratio_kappa = 0.0;     ///< max |kappa(theta) - kappa_min| / kappa_min
};

/// The five scale-weighted terms
///   nu_min^(-2+1/p),  max|nu'| / (nu_min kappa_min^(1-1/p)),  max nu / nu_min^2,
///   nu_min^(-1+1/p) / kappa_min,  max|kappa'| / kappa_min^(2-4/p),
/// with maxima over the temperature field, plus the two deviation ratios.
Smallness smallness_indicator(const SimState& s, const MaterialLaw& law, double p = 8.0);

/// Area-weighted l^p norm of |grad rho| at cell centres (central differences,
/// one-sided at the walls).
double density_gradient_norm(const ScalarField& rho, double p);

/// max |rho - 1|.
double density_deviation(const ScalarField& rho);

/// Accumulated dissipation expressed as a mean temperature rise:
///   theta_tilde(t) = (sum rho0 (theta0 - theta_min) + int_0^t Phi) / mass.
/// Each step contributes the heat actually deposited by that step, so the
/// weighted mean of theta - theta_min - theta_tilde vanishes to round-off.
class ThetaTildeTracker {
 public:
  ThetaTildeTracker(const SimState& s0, double theta_min);
  void add_heat(double heat) { accumulated_ += heat; }
  double value() const { return (base_ + accumulated_) / mass_; }
  double mass() const { return mass_; }

  struct Residual {
    double weighted_mean;  ///< sum rho (theta - theta_min - theta_tilde) hx hy
    double l2;             ///< ||theta - theta_min - theta_tilde||
  };
  Residual residual(const SimState& s) const;

 private:
  double theta_min_, mass_, base_, accumulated_ = 0.0;
};

struct ThetaTildePoint {
  double time, theta_tilde, weighted_mean, l2;
};

/// Post-processing form: rebuilds theta_tilde at every ledger row from the
/// per-step dissipation rates (rate times step length) and evaluates it on
/// the snapshots whose times match ledger rows.
std::vector<ThetaTildePoint> theta_tilde_track(const std::vector<EnergyLedger>& rows,
                                               const SimState& initial,
                                               const std::vector<SimState>& snapshots,
                                               double theta_min);

void write_csv_header(std::ostream& os, const std::vector<const char*>& columns);
void write_csv_row(std::ostream& os, const std::vector<double>& values);

}  // namespace nsf
