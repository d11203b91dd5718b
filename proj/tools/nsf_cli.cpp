// Command-line front end: nsf run | resume | experiment.

#include <CLI11.hpp>

#include <iostream>

#include "nsf/config.hpp"
#include "nsf/experiments.hpp"
#include "nsf/parallel.hpp"
#include "nsf/simulation.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string out;
  int workers = 0;
  bool deterministic = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "key = value configuration file");
  app->add_option("--out", c.out, "output directory (default: config output_dir under $NSF_OUTPUT_ROOT)");
  app->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--deterministic", c.deterministic, "fixed-order reductions");
  app->add_option("--set", c.overrides, "override a config key, key=value (repeatable)");
}

nsf::RunConfig effective_config(const Common& c) {
  nsf::RunConfig cfg = c.config_path.empty() ? nsf::RunConfig{} : nsf::load_config(c.config_path);
  std::map<std::string, std::string> kv;
  for (const std::string& o : c.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw nsf::ConfigError("--set expects key=value, got '" + o + "'");
    kv[o.substr(0, eq)] = o.substr(eq + 1);
  }
  cfg.apply(kv);
  if (c.workers > 0) cfg.workers = c.workers;
  if (c.deterministic) cfg.deterministic = true;
  cfg.validate();
  return cfg;
}

void report(const nsf::RunResult& r, const std::string& dir) {
  const nsf::LedgerRow& a = r.rows.front();
  const nsf::LedgerRow& b = r.rows.back();
  std::cout << "steps " << r.rows.size() - 1 << "  t = " << b.energy.time << "  wall " << r.wall_seconds
            << " s\n"
            << "mass drift " << (b.energy.mass - a.energy.mass) / a.energy.mass << "\n"
            << "total energy drift " << (b.energy.total - a.energy.total) / a.energy.total << "\n"
            << "min theta - theta_min " << b.min_theta - r.law.theta_min() << "\n"
            << "output in " << dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-density heat-conducting Navier-Stokes simulator"};
  app.require_subcommand(1);

  Common run_opts, resume_opts, exp_opts;
  std::string snapshot, experiment;

  CLI::App* run = app.add_subcommand("run", "run a configured scenario to t_end");
  add_common(run, run_opts);

  CLI::App* resume = app.add_subcommand("resume", "continue a run from a snapshot");
  resume->add_option("snapshot", snapshot, "snapshot file")->required()->check(CLI::ExistingFile);
  add_common(resume, resume_opts);

  CLI::App* exp = app.add_subcommand("experiment", "run a diagnostics recipe");
  exp->add_option("name", experiment, "decay | split | contraction | mms | smallness")
      ->required()
      ->check(CLI::IsMember({"decay", "split", "contraction", "mms", "smallness"}));
  add_common(exp, exp_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const nsf::RunConfig cfg = effective_config(run_opts);
      const std::string dir = nsf::resolve_output_dir(cfg, run_opts.out);
      report(nsf::run(cfg, dir), dir);
    } else if (*resume) {
      const nsf::RunConfig cfg = effective_config(resume_opts);
      const std::string dir = nsf::resolve_output_dir(cfg, resume_opts.out);
      report(nsf::resume(snapshot, cfg, dir), dir);
    } else if (*exp) {
      const nsf::RunConfig cfg = effective_config(exp_opts);
      nsf::set_execution_policy({cfg.workers, cfg.deterministic});
      const std::string dir = nsf::resolve_output_dir(cfg, exp_opts.out);
      const bool ok = nsf::run_experiment(experiment, cfg, dir);
      std::cout << experiment << ": " << (ok ? "PASS" : "FAIL") << " (report in " << dir << ")\n";
      return ok ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "nsf: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
