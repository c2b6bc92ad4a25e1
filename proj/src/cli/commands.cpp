#include "rcm/cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "rcm/cli/config.hpp"
#include "rcm/cli/csv.hpp"
#include "rcm/cli/experiments.hpp"
#include "rcm/cli/validate.hpp"
#include "rcm/env/traps.hpp"
#include "rcm/error.hpp"
#include "rcm/graph/cluster.hpp"
#include "rcm/graph/holes.hpp"
#include "rcm/walk/parallel.hpp"
#include "rcm/walk/walker.hpp"

namespace rcm {

namespace {

using Clock = std::chrono::steady_clock;

struct Globals {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<int> threads;
  std::string out = "out";
};

// --out naming a .csv or .json file is used as is; anything else is a directory.
std::string output_path(const std::string& out, const std::string& name) {
  std::filesystem::path p(out);
  if (p.extension() == ".csv" || p.extension() == ".json") return out;
  return (p / name).string();
}

ExperimentConfig base_config(const Globals& g) {
  ExperimentConfig c = g.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(g.config);
  if (g.seed) c.seeds = {*g.seed};
  if (g.threads) c.threads = *g.threads;
  return c;
}

// Flag values given on the command line; unset fields keep the config values.
struct Overrides {
  std::string law;
  std::optional<int> d, box;
  std::optional<uint64_t> walkers;
  std::optional<double> alpha, beta_factor;
  std::vector<int> n, k;

  void apply(ExperimentConfig& c) const {
    if (!law.empty()) c.law = law;
    if (d) c.d = *d;
    if (box) c.boxes = {*box};
    if (walkers) c.walkers = *walkers;
    if (alpha) c.alpha = *alpha;
    if (beta_factor) c.beta_factor = *beta_factor;
    if (!n.empty()) c.horizons = n;
    if (!k.empty()) c.annuli = k;
    c.validate();
  }
};

void add_law(CLI::App* sub, Overrides& o) { sub->add_option("--law", o.law, "law file or inline JSON"); }
void add_d(CLI::App* sub, Overrides& o) { sub->add_option("--d", o.d, "dimension"); }
void add_box(CLI::App* sub, Overrides& o) { sub->add_option("--box", o.box, "box half width L"); }

RunResult sample_env(const ExperimentConfig& c) {
  RunResult r;
  r.experiment = "sample_env";
  r.seeds = c.seeds;
  r.config_digest = c.digest();
  std::vector<std::string> cols{"seed"};
  for (int a = 0; a < c.d; ++a) cols.push_back("x" + std::to_string(a));
  cols.insert(cols.end(), {"axis", "omega"});
  r.table = CsvTable(cols);
  ConductanceLaw law = ConductanceLaw::load(c.law);
  for (uint64_t seed : c.seeds) {
    auto f = ConductanceField::dense(Box(c.d, c.boxes.at(0)), law, seed);
    const Box& box = f.box();
    for (std::size_t i = 0; i < box.size(); ++i)
      for (int ax = 0; ax < c.d; ++ax) {
        if (box.neighbor(i, 2 * ax) == Box::npos) continue;
        auto row = r.table.row();
        row.add(seed);
        for (int a = 0; a < c.d; ++a) row.add(box.coord(i, a));
        row.add(ax).add(f.up_at(i, ax));
      }
  }
  return r;
}

RunResult cluster_stats(const ExperimentConfig& c, const std::vector<double>& alphas) {
  RunResult r;
  r.experiment = "cluster_stats";
  r.seeds = c.seeds;
  r.config_digest = c.digest();
  r.table = CsvTable({"seed", "alpha", "box", "giant_size", "n_holes", "max_hole_diam", "mean_hole_size"});
  ConductanceLaw law = ConductanceLaw::load(c.law);
  for (uint64_t seed : c.seeds) {
    auto f = ConductanceField::dense(Box(c.d, c.boxes.at(0)), law, seed);
    for (double a : alphas) {
      auto dec = decompose(f, a);
      auto holes = hole_report(dec);
      int diam = 0;
      double sites = 0;
      for (const Hole& h : holes.holes) {
        diam = std::max(diam, h.diameter);
        sites += double(h.sites.size());
      }
      r.table.row()
          .add(seed)
          .add(a)
          .add(c.boxes.at(0))
          .add(uint64_t(dec.giant_size))
          .add(uint64_t(holes.holes.size()))
          .add(diam)
          .add(holes.holes.empty() ? 0.0 : sites / double(holes.holes.size()));
    }
  }
  return r;
}

RunResult simulate_returns(const ExperimentConfig& c) {
  RunResult r;
  r.experiment = "simulate_return";
  r.seeds = c.seeds;
  r.config_digest = c.digest();
  r.threads = resolve_threads(c.threads);
  r.table = CsvTable({"n", "hits", "walkers", "p_hat", "stderr", "seed"});
  ConductanceLaw law = ConductanceLaw::load(c.law);
  for (uint64_t seed : c.seeds) {
    auto f = ConductanceField::lazy(c.d, law, seed);
    for (const auto& e : simulate_return_series(f, c.horizons, c.walkers, seed, c.threads))
      r.table.row().add(e.n).add(e.hits).add(e.walkers).add(e.p_hat).add(e.stderr_).add(seed);
  }
  return r;
}

RunResult trap_census_run(const ExperimentConfig& c) {
  RunResult r;
  r.experiment = "trap_census";
  r.seeds = c.seeds;
  r.config_digest = c.digest();
  r.table = CsvTable({"seed", "n", "box", "trap_edges", "flagged", "flagged_fraction", "rho_n"});
  ConductanceLaw law = ConductanceLaw::load(c.law);
  for (uint64_t seed : c.seeds) {
    auto f = ConductanceField::dense(Box(c.d, c.boxes.at(0)), law, seed);
    for (int n : c.horizons) {
      if (n < 4) throw ConfigError("trap scale n must be at least 4");
      auto census = trap_census(f, n);
      r.table.row()
          .add(seed)
          .add(n)
          .add(c.boxes.at(0))
          .add(uint64_t(census.trap_edges.size()))
          .add(uint64_t(census.records.size()))
          .add(double(census.records.size()) / double(f.box().size()))
          .add(rho_n(law, n, c.d));
    }
  }
  return r;
}

void finish(RunResult r, const std::string& path, Clock::time_point t0, std::ostream& out) {
  if (r.wall_seconds == 0) r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  write_run(r, path);
  out << r.experiment << ": " << r.table.rows().size() << " rows -> " << path << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random conductance model experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "experiment config JSON");
  app.add_option("--seed", g.seed, "environment and walker seed");
  app.add_option("--threads", g.threads, "worker threads (RCM_THREADS overrides)");
  app.add_option("--out", g.out, "output directory, or a .csv/.json file path");

  Overrides ov;
  std::vector<double> alphas;
  std::string op = "annulus-bound";
  ExactOptions ex;
  bool inject = false, profile = false;

  auto* env = app.add_subcommand("sample-env", "edge conductances of a dense box");
  add_law(env, ov), add_d(env, ov), add_box(env, ov);
  auto* cst = app.add_subcommand("cluster-stats", "giant component and hole statistics");
  add_law(cst, ov), add_d(cst, ov), add_box(cst, ov);
  cst->add_option("--alpha", alphas, "strong-edge thresholds");
  auto* ret = app.add_subcommand("simulate-return", "Monte Carlo P^{2n}(0,0) on the lazy field");
  add_law(ret, ov), add_d(ret, ov);
  ret->add_option("--n", ov.n, "horizons");
  ret->add_option("--walkers", ov.walkers, "walkers");
  auto* tc = app.add_subcommand("trap-census", "trap edges and A_n counts on a dense box");
  add_law(tc, ov), add_d(tc, ov), add_box(tc, ov);
  tc->add_option("--n", ov.n, "trap scales");
  auto* rnk = app.add_subcommand("rnk-moments", "moments of R_{n,k} against rho_n t_k");
  add_law(rnk, ov), add_d(rnk, ov), add_box(rnk, ov);
  rnk->add_option("--n", ov.n, "trap scales");
  rnk->add_option("--k", ov.k, "annuli (default: the admissible window)");
  rnk->add_option("--walkers", ov.walkers, "walkers");
  rnk->add_option("--alpha", ov.alpha, "strong-edge threshold");
  rnk->add_option("--beta-factor", ov.beta_factor, "safety factor on the mean hiding time");
  auto* ek = app.add_subcommand("exact-kernel",
                                "exact finite-chain checks. CSV columns per op:\n"
                                "  annulus-bound: n, lhs, rhs, gap, holds\n"
                                "  green-id: states, killed, identity_error, holds, cs_excess_raw, cs_excess_symmetric\n"
                                "  green-cmp: probe, hat, bound, holds, operator_gap, order_holds\n"
                                "  nash: t, lhs, rhs1, rhs2, rhs3, boundary, slack, holds\n"
                                "  poincare: probe, ratio\n"
                                "  decay: ell, profile");
  auto* nash = app.add_subcommand("nash-check", "derivative, variance and monotonicity checks of the entropy functional");
  for (CLI::App* sub : {ek, nash}) {
    sub->add_option("--law", ex.law, "law file or inline JSON");
    sub->add_option("--d", ex.d, "dimension")->default_val(2);
    sub->add_option("--box", ex.box, "box half width L")->default_val(6);
    sub->add_option("--alpha", ex.alpha, "strong-edge threshold")->default_val(0.25);
    sub->add_option("--radius", ex.radius, "Nash ball radius (default L - 1)");
    sub->add_option("--probes", ex.probes, "random probes")->default_val(20);
  }
  ek->add_option("--op", op, "operation")
      ->check(CLI::IsMember({"annulus-bound", "green-id", "green-cmp", "nash", "poincare", "decay"}));
  auto* an = app.add_subcommand("anomaly", "n^2 P^{2n}(0,0) against the constant-field baseline");
  add_law(an, ov), add_d(an, ov);
  an->add_option("--n", ov.n, "horizons");
  an->add_option("--walkers", ov.walkers, "walkers");
  an->add_flag("--profile", profile, "also write the annulus profile");
  auto* val = app.add_subcommand("validate", "deterministic identity and inequality checks");
  val->add_flag("--inject-fault", inject, "corrupt one kernel row (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const auto t0 = Clock::now();
  try {
    if (val->parsed()) {
      ValidateOptions vo;
      vo.inject_fault = inject;
      if (g.seed) vo.seed = *g.seed;
      auto rep = validate_suite(vo);
      std::string path = output_path(g.out, "validate.json");
      std::filesystem::path p(path);
      if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
      std::ofstream(path) << rep.to_json().dump(2) << '\n';
      for (const auto& c : rep.checks)
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
            << " tol=" << format_double(c.tolerance) << " cases=" << c.cases << '\n';
      return rep.passed() ? kExitOk : kExitValidation;
    }
    if (ek->parsed() || nash->parsed()) {
      if (g.seed) ex.seed = *g.seed;
      if (!g.config.empty()) {
        auto c = base_config(g);
        if (ex.law.empty()) ex.law = c.law;
        ex.seed = c.seeds.at(0);
      }
      if (ek->parsed())
        finish(exact_kernel(ex, op), output_path(g.out, "exact_" + op + ".csv"), t0, out);
      else
        finish(nash_check(ex), output_path(g.out, "nash_check.csv"), t0, out);
      return kExitOk;
    }
    ExperimentConfig c = base_config(g);
    if (env->parsed() || cst->parsed() || tc->parsed()) {
      if (!ov.d) ov.d = 2;
      if (!ov.box && g.config.empty()) ov.box = 8;
    }
    ov.apply(c);
    if (c.law.empty()) throw ConfigError("no conductance law given (--law or config)");
    if (env->parsed()) finish(sample_env(c), output_path(g.out, "sample_env.csv"), t0, out);
    if (cst->parsed()) {
      if (alphas.empty()) alphas = {c.alpha};
      finish(cluster_stats(c, alphas), output_path(g.out, "cluster_stats.csv"), t0, out);
    }
    if (ret->parsed()) finish(simulate_returns(c), output_path(g.out, "simulate_return.csv"), t0, out);
    if (tc->parsed()) finish(trap_census_run(c), output_path(g.out, "trap_census.csv"), t0, out);
    if (rnk->parsed()) finish(moment_experiment(c), output_path(g.out, "rnk_moments.csv"), t0, out);
    if (an->parsed()) {
      std::string path = output_path(g.out, "anomaly.csv");
      finish(anomaly_experiment(c), path, t0, out);
      if (profile) {
        std::filesystem::path p(path);
        finish(annulus_profile(c), (p.parent_path() / "annulus_profile.csv").string(), Clock::now(), out);
      }
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace rcm
