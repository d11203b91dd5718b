#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsf/config.hpp"
#include "nsf/diagnostics.hpp"
#include "nsf/picard.hpp"
#include "nsf/state.hpp"

namespace nsf {

/// One ledger record. The first group is what the CSV carries; the rest is
/// kept in memory for the acceptance checks.
struct LedgerRow {
  EnergyLedger energy;  ///< dissipation_rate is the rate applied by the step ending here
  double min_theta = 0.0;
  double K = 0.0;
  double nb_ratio_nu = 0.0, nb_ratio_kappa = 0.0;
  double grad_rho_lp = 0.0;
  int sweeps = 0;

  double rho_deviation = 0.0;  ///< max |rho - 1|
  double viscous_work = 0.0;   ///< see IterationReport
  double heat_input = 0.0;
  double dt = 0.0;
  int substeps = 0;
};

const std::vector<const char*>& ledger_columns();
std::vector<double> ledger_values(const LedgerRow& r);

/// Row for a state that was not produced by a step (initial data, resume point).
LedgerRow state_row(const SimState& s, const MaterialLaw& law, double p);

/// Called after every accepted step (report != nullptr) and once for the
/// starting state (report == nullptr).
using StepObserver =
    std::function<void(const SimState&, const LedgerRow&, const IterationReport*)>;

struct RunResult {
  MaterialLaw law;
  std::vector<LedgerRow> rows;  ///< every step, starting with the start state
  SimState final_state;
  double wall_seconds = 0.0;
};

/// Advances `start` with the scheme until t_end (step index runs from
/// round(start.time/dt) to round(t_end/dt)). No file output.
RunResult simulate(const RunConfig& c, const SimState& start, const MaterialLaw& law,
                   const StepObserver& observer = {});

/// Effective output directory: `out` if non-empty, else config.output_dir,
/// placed under $NSF_OUTPUT_ROOT when that is set and the path is relative.
std::string resolve_output_dir(const RunConfig& c, const std::string& out);

/// Full run with artifacts: snapshots/step_NNNNNNNN.nsf, ledger.csv (rows at
/// the snapshot cadence plus the final step) and manifest.txt.
RunResult run(const RunConfig& c, const std::string& out_dir);

/// Continues from a snapshot. The ledger in out_dir is appended to (or
/// created). law_theta_min must be set in the config, or it is taken from
/// the snapshot's temperature minimum.
RunResult resume(const std::string& snapshot_path, const RunConfig& c, const std::string& out_dir);

std::string manifest_text(const RunConfig& effective, double wall_seconds);

}  // namespace nsf
