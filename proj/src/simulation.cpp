#include "nsf/simulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nsf/parallel.hpp"
#include "nsf/scenarios.hpp"
#include "nsf/snapshot.hpp"

#ifndef NSF_VERSION
#define NSF_VERSION "unknown"
#endif

namespace nsf {
namespace fs = std::filesystem;

const std::vector<const char*>& ledger_columns() {
  static const std::vector<const char*> cols = {
      "time",     "mass",      "kinetic",     "thermal",        "total",
      "dissipation_rate",      "modified",    "min_theta",      "K",
      "nb_ratio_nu",           "nb_ratio_kappa", "grad_rho_lp", "sweeps"};
  return cols;
}

std::vector<double> ledger_values(const LedgerRow& r) {
  const EnergyLedger& e = r.energy;
  return {e.time,      e.mass,  e.kinetic,       e.thermal,        e.total,
          e.dissipation_rate,   e.modified,      r.min_theta,      r.K,
          r.nb_ratio_nu,        r.nb_ratio_kappa, r.grad_rho_lp,  static_cast<double>(r.sweeps)};
}

LedgerRow state_row(const SimState& s, const MaterialLaw& law, double p) {
  LedgerRow r;
  r.energy = ledger(s, law);
  r.min_theta = s.theta.min();
  const Smallness k = smallness_indicator(s, law, p);
  r.K = k.K;
  r.nb_ratio_nu = k.ratio_nu;
  r.nb_ratio_kappa = k.ratio_kappa;
  r.grad_rho_lp = density_gradient_norm(s.rho, p);
  r.rho_deviation = density_deviation(s.rho);
  return r;
}

RunResult simulate(const RunConfig& c, const SimState& start, const MaterialLaw& law,
                   const StepObserver& observer) {
  c.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const PicardOptions opt = c.picard();
  const long first = std::lround(start.time / c.dt);
  const long last = std::lround(c.t_end / c.dt);

  RunResult res{law, {}, start, 0.0};
  res.rows.push_back(state_row(start, law, c.lp_exponent));
  if (observer) observer(start, res.rows.back(), nullptr);

  SimState s(start);
  for (long n = first; n < last; ++n) {
    StepResult step = advance(s, c.dt, law, opt);
    s = std::move(step.state);
    const IterationReport& rep = step.report;
    LedgerRow row = state_row(s, law, c.lp_exponent);
    row.energy.dissipation_rate = rep.heat_input / rep.dt;
    row.sweeps = rep.sweeps;
    row.viscous_work = rep.viscous_work;
    row.heat_input = rep.heat_input;
    row.dt = rep.dt;
    row.substeps = rep.substeps;
    res.rows.push_back(row);
    if (observer) observer(s, res.rows.back(), &rep);
  }
  res.final_state = std::move(s);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string resolve_output_dir(const RunConfig& c, const std::string& out) {
  if (!out.empty()) return out;
  fs::path p(c.output_dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("NSF_OUTPUT_ROOT"); root && *root) p = fs::path(root) / p;
  }
  return p.string();
}

std::string manifest_text(const RunConfig& effective, double wall_seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", wall_seconds);
  return std::string("# nsf run manifest\n# version ") + NSF_VERSION + "\n# wall_clock_seconds " +
         buf + "\n" + to_text(effective);
}

namespace {

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%08ld.nsf", step);
  return buf;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + p.string() + "'");
}

// Runs and writes snapshots plus ledger rows at the configured cadence.
RunResult run_with_output(const RunConfig& c, const SimState& start, const MaterialLaw& law,
                          const fs::path& dir, bool append) {
  fs::create_directories(dir / "snapshots");
  const fs::path ledger_path = dir / "ledger.csv";
  const bool fresh = !append || !fs::exists(ledger_path);
  std::ofstream csv(ledger_path, fresh ? std::ios::trunc : std::ios::app);
  if (!csv) throw std::runtime_error("cannot write '" + ledger_path.string() + "'");
  if (fresh) write_csv_header(csv, ledger_columns());

  const long first = std::lround(start.time / c.dt);
  const long last = std::lround(c.t_end / c.dt);
  long step = first;
  const StepObserver obs = [&](const SimState& s, const LedgerRow& row, const IterationReport* rep) {
    if (rep) ++step;
    const bool start_row = rep == nullptr;
    if ((start_row && fresh) || (!start_row && (step % c.snapshot_every == 0 || step == last))) {
      write_csv_row(csv, ledger_values(row));
      csv.flush();
    }
    if (start_row || step % c.snapshot_every == 0 || step == last)
      write_snapshot((dir / "snapshots" / snapshot_name(step)).string(), s);
  };
  RunResult res = simulate(c, start, law, obs);
  if (!csv) throw std::runtime_error("write failed for '" + ledger_path.string() + "'");

  RunConfig eff = c;
  eff.law_theta_min = law.theta_min();
  eff.output_dir = dir.string();
  write_text(dir / "manifest.txt", manifest_text(eff, res.wall_seconds));
  return res;
}

}  // namespace

RunResult run(const RunConfig& c, const std::string& out_dir) {
  c.validate();
  set_execution_policy({c.workers, c.deterministic});
  const SimState s0 = initial_state(c);
  const InitialDataReport init = validate_initial_data(s0, c.m, c.l, c.density_threshold);
  if (!init.density_small)
    std::cerr << "warning: max |rho0 - 1| = " << init.density_deviation
              << " is not below the threshold " << c.density_threshold << "\n";
  const MaterialLaw law = c.law(init.theta_min);
  return run_with_output(c, s0, law, out_dir, false);
}

RunResult resume(const std::string& snapshot_path, const RunConfig& c, const std::string& out_dir) {
  c.validate();
  set_execution_policy({c.workers, c.deterministic});
  const SimState s = read_snapshot(snapshot_path);
  if (s.grid().nx() != c.nx || s.grid().ny() != c.ny || s.grid().lx() != c.lx ||
      s.grid().ly() != c.ly)
    throw SnapshotError("snapshot grid does not match the configuration");
  const MaterialLaw law = c.law(s.theta.min());
  return run_with_output(c, s, law, out_dir, true);
}

}  // namespace nsf
