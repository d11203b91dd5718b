#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "nsf/picard.hpp"

namespace nsf {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every run parameter, with defaults describing the reference scenario.
struct RunConfig {
  // grid
  int nx = 64, ny = 64;
  double lx = 4.0, ly = 4.0;
  // time
  double dt = 2e-3;
  double t_end = 2.0;
  // material
  double m = 1.0, l = 1.0;
  /// theta_min of the material law; 0 means "min of the initial temperature".
  double law_theta_min = 0.0;
  // solver
  double picard_tol = 1e-8;
  int max_sweeps = 50;
  int max_halvings = 6;
  double linear_tol = 1e-10;
  double projection_tol = 1e-12;
  // initial data
  std::string scenario = "pudding";  ///< pudding | rest | random
  double theta_min = 10.0;           ///< temperature floor of the initial data
  double theta_bump = 1.0;           ///< amplitude of the warm spot above theta_min
  double bump_radius = 1.0;
  double rho_amplitude = 0.05;
  double velocity_amplitude = 0.2;
  int velocity_mode = 1;
  double density_threshold = 0.1;    ///< smallness threshold for max |rho0 - 1|
  std::uint64_t seed = 1;
  // diagnostics
  double lp_exponent = 8.0;
  // output
  int snapshot_every = 50;
  std::string output_dir = "out";
  bool deterministic = true;
  int workers = 1;

  void validate() const;
  PicardOptions picard() const;
  MaterialLaw law(double theta_min_initial) const;

  std::map<std::string, std::string> to_map() const;
  /// Applies the keys of `kv` on top of the current values.
  void apply(const std::map<std::string, std::string>& kv);

  bool operator==(const RunConfig&) const = default;
};

/// `key = value` lines; blank lines and text after '#' are ignored.
std::map<std::string, std::string> parse_key_values(const std::string& text);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical text form; doubles are written with 17 significant digits so
/// that parse_config(to_text(c)) == c.
std::string to_text(const RunConfig& c);

}  // namespace nsf
