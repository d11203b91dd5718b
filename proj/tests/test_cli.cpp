#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsf/config.hpp"
#include "nsf/experiments.hpp"
#include "nsf/simulation.hpp"
#include "nsf/snapshot.hpp"
#include "support.hpp"

using namespace nsf;
using namespace nsf::test;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

RunConfig tiny(double t_end) {
  RunConfig c;
  c.nx = c.ny = 16;
  c.dt = 4e-3;
  c.t_end = t_end;
  c.snapshot_every = 5;
  return c;
}

RunConfig random_config(Rng& r) {
  RunConfig c;
  c.nx = r.integer(2, 300);
  c.ny = r.integer(2, 300);
  c.lx = r.uniform(0.1, 10.0);
  c.ly = r.uniform(0.1, 10.0);
  c.dt = r.uniform(1e-6, 1e-1);
  c.t_end = c.dt * r.integer(0, 1000);
  c.m = r.uniform(0.0, 3.0);
  c.l = r.uniform(0.0, 3.0);
  c.law_theta_min = r.coin() ? 0.0 : r.uniform(0.1, 100.0);
  c.picard_tol = r.uniform(1e-12, 1e-4);
  c.max_sweeps = r.integer(1, 200);
  c.max_halvings = r.integer(0, 10);
  c.linear_tol = r.uniform(1e-14, 1e-6);
  c.projection_tol = r.uniform(1e-14, 1e-6);
  c.scenario = std::vector<std::string>{"pudding", "rest", "random"}[r.integer(0, 2)];
  c.theta_min = r.uniform(0.1, 100.0);
  c.theta_bump = r.uniform(0.0, 5.0);
  c.bump_radius = r.uniform(0.01, 3.0);
  c.rho_amplitude = r.uniform(0.0, 0.5);
  c.velocity_amplitude = r.uniform(0.0, 2.0);
  c.velocity_mode = r.integer(1, 5);
  c.density_threshold = r.uniform(0.01, 1.0);
  c.seed = static_cast<std::uint64_t>(r.integer(0, 1 << 30)) * 7919u;
  c.lp_exponent = r.uniform(2.5, 16.0);
  c.snapshot_every = r.integer(1, 500);
  c.output_dir = "out_" + std::to_string(r.integer(0, 99999));
  c.deterministic = r.coin();
  c.workers = r.integer(1, 8);
  return c;
}

}  // namespace

TEST_CASE("property: configuration text round-trips") {
  Rng r(81);
  for (int t = 0; t < kTrials; ++t) {
    const RunConfig c = random_config(r);
    CHECK(parse_config(to_text(c)) == c);
  }
  CHECK(parse_config("") == RunConfig{});
}

TEST_CASE("bad configuration keys and values are rejected") {
  CHECK_THROWS_AS(parse_config("nxx = 4"), ConfigError);
  CHECK_THROWS_AS(parse_config("nx = four"), ConfigError);
  CHECK_THROWS_AS(parse_config("dt = 1e-3 junk"), ConfigError);
  CHECK_THROWS_AS(parse_config("nx 4"), ConfigError);
  CHECK_THROWS_AS(parse_config("dt = -1").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("scenario = vortex").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("t_end = 0.0025\ndt = 0.001").validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/nsf.cfg"), ConfigError);
  const RunConfig c = parse_config("# comment\n\nnx = 12   # trailing\nscenario = rest\n");
  CHECK(c.nx == 12);
  CHECK(c.scenario == "rest");
}

TEST_CASE("property: snapshots round-trip bit for bit") {
  Rng r(82);
  const fs::path dir = scratch("snapshot");
  for (int t = 0; t < kTrials; ++t) {
    const Grid g = random_grid(r);
    SimState s(g);
    s.rho = random_scalar(g, r, 0.5, 1.5);
    s.vel = random_vector(g, r, 1.0);
    s.theta = random_scalar(g, r, 1.0, 9.0);
    s.pi = random_scalar(g, r, -1.0, 1.0);
    s.time = r.uniform(0.0, 10.0);
    const std::string path = (dir / "s.nsf").string();
    write_snapshot(path, s);
    const SimState b = read_snapshot(path);
    CHECK(b.grid().nx() == g.nx());
    CHECK(b.grid().ly() == g.ly());
    CHECK(b.time == s.time);
    CHECK(std::ranges::equal(b.rho.values(), s.rho.values()));
    CHECK(std::ranges::equal(b.vel.u_values(), s.vel.u_values()));
    CHECK(std::ranges::equal(b.vel.v_values(), s.vel.v_values()));
    CHECK(std::ranges::equal(b.theta.values(), s.theta.values()));
    CHECK(std::ranges::equal(b.pi.values(), s.pi.values()));
  }
}

TEST_CASE("damaged snapshots are rejected") {
  const fs::path dir = scratch("damaged");
  const Grid g(5, 4, 1.0, 1.0);
  const std::string path = (dir / "ok.nsf").string();
  write_snapshot(path, SimState(g));
  const std::string bytes = slurp(path);

  std::string bad = bytes;
  bad[0] = 'X';
  std::ofstream(dir / "magic.nsf", std::ios::binary) << bad;
  CHECK_THROWS_AS(read_snapshot((dir / "magic.nsf").string()), SnapshotError);

  std::ofstream(dir / "short.nsf", std::ios::binary) << bytes.substr(0, bytes.size() - 3);
  CHECK_THROWS_AS(read_snapshot((dir / "short.nsf").string()), SnapshotError);

  std::ofstream(dir / "long.nsf", std::ios::binary) << bytes << "extra";
  CHECK_THROWS_AS(read_snapshot((dir / "long.nsf").string()), SnapshotError);

  CHECK_THROWS_AS(read_snapshot((dir / "missing.nsf").string()), SnapshotError);
}

TEST_CASE("a zero-length run writes the initial snapshot, one ledger row and a manifest") {
  const fs::path dir = scratch("zero");
  const RunConfig c = tiny(0.0);
  const RunResult res = run(c, dir.string());
  CHECK(res.rows.size() == 1);
  int snaps = 0;
  for (const auto& e : fs::directory_iterator(dir / "snapshots")) snaps += e.path().extension() == ".nsf";
  CHECK(snaps == 1);
  std::istringstream ledger(slurp(dir / "ledger.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(ledger, line)) ++lines;
  CHECK(lines == 2);

  // The manifest body parses back to the effective configuration.
  RunConfig eff = c;
  eff.law_theta_min = res.law.theta_min();
  eff.output_dir = dir.string();
  CHECK(parse_config(slurp(dir / "manifest.txt")) == eff);
  CHECK(slurp(dir / "manifest.txt").rfind("# ", 0) == 0);
}

TEST_CASE("reruns are bit-identical") {
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  const RunConfig c = tiny(0.04);
  run(c, a.string());
  run(c, b.string());
  CHECK(slurp(a / "ledger.csv") == slurp(b / "ledger.csv"));
  CHECK(slurp(a / "snapshots" / "step_00000010.nsf") == slurp(b / "snapshots" / "step_00000010.nsf"));
}

TEST_CASE("resuming reproduces the uninterrupted run") {
  const fs::path full = scratch("resume_full"), part = scratch("resume_part");
  run(tiny(0.04), full.string());
  const RunResult first = run(tiny(0.02), part.string());

  // The resumed run takes its material law from the first run's manifest.
  RunConfig rc = parse_config(slurp(part / "manifest.txt"));
  CHECK(rc.law_theta_min == first.law.theta_min());

  // Resuming at the final time takes no step and rewrites the same snapshot.
  const std::string at = (part / "snapshots" / "step_00000005.nsf").string();
  const std::string before = slurp(at);
  const fs::path idle = scratch("resume_none");
  const RunResult none = resume(at, rc, idle.string());
  CHECK(none.rows.size() == 1);
  CHECK(slurp(idle / "snapshots" / "step_00000005.nsf") == before);

  rc.t_end = 0.04;
  resume(at, rc, part.string());
  CHECK(slurp(part / "snapshots" / "step_00000010.nsf") == slurp(full / "snapshots" / "step_00000010.nsf"));
  CHECK(slurp(part / "ledger.csv") == slurp(full / "ledger.csv"));

  RunConfig other = rc;
  other.nx = 20;
  CHECK_THROWS_AS(resume(at, other, part.string()), SnapshotError);
}

TEST_CASE("unknown experiment names are rejected") {
  CHECK_THROWS_AS(run_experiment("vortex", tiny(0.0), scratch("exp").string()), std::invalid_argument);
}

TEST_CASE("output directory resolution") {
  RunConfig c;
  c.output_dir = "rel";
  CHECK(resolve_output_dir(c, "given") == "given");
  ::unsetenv("NSF_OUTPUT_ROOT");
  CHECK(resolve_output_dir(c, "") == "rel");
  ::setenv("NSF_OUTPUT_ROOT", "/tmp/root", 1);
  CHECK(fs::path(resolve_output_dir(c, "")) == fs::path("/tmp/root/rel"));
  c.output_dir = "/abs";
  CHECK(resolve_output_dir(c, "") == "/abs");
  ::unsetenv("NSF_OUTPUT_ROOT");
}
