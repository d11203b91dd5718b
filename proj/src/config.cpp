#include "nsf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>
#include <vector>

namespace nsf {
namespace {

using Member = std::variant<int RunConfig::*, double RunConfig::*, bool RunConfig::*,
                            std::string RunConfig::*, std::uint64_t RunConfig::*>;

const std::vector<std::pair<const char*, Member>>& fields() {
  static const std::vector<std::pair<const char*, Member>> f = {
      {"nx", &RunConfig::nx},
      {"ny", &RunConfig::ny},
      {"lx", &RunConfig::lx},
      {"ly", &RunConfig::ly},
      {"dt", &RunConfig::dt},
      {"t_end", &RunConfig::t_end},
      {"m", &RunConfig::m},
      {"l", &RunConfig::l},
      {"law_theta_min", &RunConfig::law_theta_min},
      {"picard_tol", &RunConfig::picard_tol},
      {"max_sweeps", &RunConfig::max_sweeps},
      {"max_halvings", &RunConfig::max_halvings},
      {"linear_tol", &RunConfig::linear_tol},
      {"projection_tol", &RunConfig::projection_tol},
      {"scenario", &RunConfig::scenario},
      {"theta_min", &RunConfig::theta_min},
      {"theta_bump", &RunConfig::theta_bump},
      {"bump_radius", &RunConfig::bump_radius},
      {"rho_amplitude", &RunConfig::rho_amplitude},
      {"velocity_amplitude", &RunConfig::velocity_amplitude},
      {"velocity_mode", &RunConfig::velocity_mode},
      {"density_threshold", &RunConfig::density_threshold},
      {"seed", &RunConfig::seed},
      {"lp_exponent", &RunConfig::lp_exponent},
      {"snapshot_every", &RunConfig::snapshot_every},
      {"output_dir", &RunConfig::output_dir},
      {"deterministic", &RunConfig::deterministic},
      {"workers", &RunConfig::workers},
  };
  return f;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config: bad value '" + v + "' for key '" + key + "'");
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("config: " + what);
}

}  // namespace

void RunConfig::validate() const {
  require(nx >= 4 && ny >= 4, "nx and ny must be >= 4");
  require(lx > 0.0 && ly > 0.0, "lx and ly must be positive");
  require(dt > 0.0, "dt must be positive");
  require(t_end >= 0.0, "t_end must be non-negative");
  const double steps = t_end / dt;
  require(std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, steps),
          "t_end must be a whole number of steps dt");
  require(m >= 0.0 && l >= 0.0, "material exponents must be non-negative");
  require(law_theta_min >= 0.0, "law_theta_min must be >= 0 (0 = from initial data)");
  for (double tol : {picard_tol, linear_tol, projection_tol})
    require(tol > 0.0 && tol < 1.0, "tolerances must lie in (0,1)");
  require(max_sweeps >= 1, "max_sweeps must be >= 1");
  require(max_halvings >= 0, "max_halvings must be >= 0");
  require(scenario == "pudding" || scenario == "rest" || scenario == "random",
          "unknown scenario '" + scenario + "'");
  require(theta_min > 0.0, "theta_min must be positive");
  require(theta_bump >= 0.0, "theta_bump must be >= 0");
  require(bump_radius > 0.0, "bump_radius must be positive");
  require(rho_amplitude >= 0.0 && rho_amplitude < 1.0, "rho_amplitude must lie in [0,1)");
  require(velocity_mode >= 1, "velocity_mode must be >= 1");
  require(density_threshold > 0.0, "density_threshold must be positive");
  require(lp_exponent > 1.0, "lp_exponent must be > 1");
  require(snapshot_every >= 1, "snapshot_every must be >= 1");
  require(workers >= 1, "workers must be >= 1");
}

PicardOptions RunConfig::picard() const {
  PicardOptions o;
  o.tol = picard_tol;
  o.max_sweeps = max_sweeps;
  o.max_halvings = max_halvings;
  o.momentum.tol = linear_tol;
  o.heat.tol = linear_tol;
  o.projection.tol = projection_tol;
  return o;
}

MaterialLaw RunConfig::law(double theta_min_initial) const {
  return MaterialLaw(m, l, law_theta_min > 0.0 ? law_theta_min : theta_min_initial);
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> out;
  for (const auto& [name, member] : fields()) {
    std::visit(
        [&](auto ptr) {
          using T = std::remove_cvref_t<decltype(this->*ptr)>;
          const T& v = this->*ptr;
          if constexpr (std::is_same_v<T, double>)
            out[name] = format_double(v);
          else if constexpr (std::is_same_v<T, bool>)
            out[name] = v ? "true" : "false";
          else if constexpr (std::is_same_v<T, std::string>)
            out[name] = v;
          else
            out[name] = std::to_string(v);
        },
        member);
  }
  return out;
}

void RunConfig::apply(const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    const auto it = std::find_if(fields().begin(), fields().end(),
                                 [&](const auto& f) { return key == f.first; });
    if (it == fields().end()) throw ConfigError("config: unknown key '" + key + "'");
    std::visit(
        [&](auto ptr) {
          using T = std::remove_cvref_t<decltype(this->*ptr)>;
          T& dst = this->*ptr;
          if constexpr (std::is_same_v<T, bool>) {
            if (value == "true" || value == "1")
              dst = true;
            else if (value == "false" || value == "0")
              dst = false;
            else
              throw ConfigError("config: bad boolean '" + value + "' for key '" + key + "'");
          } else if constexpr (std::is_same_v<T, std::string>) {
            dst = value;
          } else {
            dst = parse_number<T>(key, value);
          }
        },
        it->second);
  }
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  c.apply(parse_key_values(text));
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
  const auto kv = c.to_map();
  std::string out;
  for (const auto& f : fields()) out += std::string(f.first) + " = " + kv.at(f.first) + "\n";
  return out;
}

}  // namespace nsf
