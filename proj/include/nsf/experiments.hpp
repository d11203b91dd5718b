#pragma once

#include <string>
#include <vector>

#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"

namespace nsf {

/// Velocity decay at nu_min and 2 nu_min (theta_min scaled by 2^(1/m)).
struct DecayReport {
  double nu_lo = 0.0, nu_hi = 0.0;
  DecayFit fit_lo, fit_hi;
  double ratio = 0.0;  ///< fit_hi.rate / fit_lo.rate
  std::vector<double> times, norms_lo, norms_hi;
  bool passed = false;
};
DecayReport decay_experiment(const RunConfig& c);

/// v = N + S and theta = H + E + theta_min along a run, with S and E from the
/// constant-coefficient semigroups at nu_min and kappa_min.
struct SplitReport {
  double n0 = 0.0, h0 = 0.0;  ///< ||N(0)||, ||H(0)||
  std::vector<double> times, s_norm, n_norm, h_norm, e_mean;
  double e_mean_drift = 0.0;   ///< max |mean E(t) - mean E(0)|
  DecayFit s_fit;
  double s_fit_relative_residual = 0.0;  ///< rms residual / range of log ||S|| on the window
  /// Regularity proxies of N (exponent p, scale nu_min) and of H - mean(H)
  /// (exponent p/2, scale kappa_min) at t_end/2 and t_end.
  double xi_n_half = 0.0, xi_n_full = 0.0, xi_h_half = 0.0, xi_h_full = 0.0;
  bool passed = false;      ///< the split identities and the S fit
  bool xi_bounded = false;  ///< both proxies agree within 5% between t_end/2 and t_end
};
SplitReport split_experiment(const RunConfig& c);

/// Contraction certificate of the first step at dt and dt/2.
struct ContractionReport {
  double dt_coarse = 0.0, dt_fine = 0.0;
  double cert_coarse = 0.0, cert_fine = 0.0;
  int sweeps_coarse = 0, sweeps_fine = 0;
  std::vector<double> combined_coarse, combined_fine;
  bool passed = false;
};
ContractionReport contraction_experiment(const RunConfig& c, double dt_coarse = 1e-3);

/// Forced steady manufactured solution on the unit square:
///   velocity from psi = A sin^2(pi x) sin^2(pi y), zero pressure,
///   theta = theta0 + cos(pi x) cos(pi y), m = l = 1,
/// marched to steady state at each resolution.
struct MmsReport {
  std::vector<int> sizes;
  std::vector<double> err_v, err_theta, max_div;
  double order_v = 0.0, order_theta = 0.0;  ///< smallest observed pairwise order
  bool passed = false;
};
MmsReport mms_experiment(const std::vector<int>& sizes = {32, 64, 128}, double amplitude = 0.01,
                         double theta0 = 2.0);

/// K and the deviation ratios of the initial state for several theta_min at
/// fixed data amplitude.
struct SmallnessReport {
  std::vector<double> theta_min, K, ratio_nu, ratio_kappa;
  bool passed = false;
};
SmallnessReport smallness_experiment(const RunConfig& c,
                                     const std::vector<double>& floors = {1.0, 10.0, 100.0});

/// Runs a named experiment (decay, split, contraction, mms, smallness),
/// writes <name>.csv and <name>_summary.txt into out_dir and returns whether
/// it met its acceptance bounds. Throws std::invalid_argument for an
/// unknown name.
bool run_experiment(const std::string& name, const RunConfig& c, const std::string& out_dir);

}  // namespace nsf
