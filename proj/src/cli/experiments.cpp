#include "rcm/cli/experiments.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "rcm/env/annulus.hpp"
#include "rcm/env/hash.hpp"
#include "rcm/error.hpp"
#include "rcm/kernel/annulus_bound.hpp"
#include "rcm/kernel/chain.hpp"
#include "rcm/kernel/chaining.hpp"
#include "rcm/kernel/comparison.hpp"
#include "rcm/kernel/heat.hpp"
#include "rcm/kernel/nash.hpp"
#include "rcm/walk/hiding.hpp"
#include "rcm/walk/parallel.hpp"
#include "rcm/walk/rnk.hpp"
#include "rcm/walk/walker.hpp"

namespace rcm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ConductanceLaw load_law(const std::string& law) {
  if (law.empty()) throw ConfigError("no conductance law given");
  return ConductanceLaw::load(law);
}

// Counts of X_n in each annulus B_k, k = 0..kmax, for walkers started at the origin.
std::vector<uint64_t> annulus_counts(const ConductanceField& f, int n, uint64_t walkers, uint64_t seed, int threads) {
  Vertex far;
  far[0] = n;
  const int kmax = annulus_of(far, 1);
  const uint64_t block = 4096;
  std::vector<std::vector<uint64_t>> per((walkers + block - 1) / block, std::vector<uint64_t>(std::size_t(kmax + 1), 0));
  parallel_blocks(walkers, block, resolve_threads(threads), [&](uint64_t b, uint64_t lo, uint64_t hi) {
    for (uint64_t w = lo; w < hi; ++w) {
      WalkerStream s(seed, w);
      Vertex x = origin();
      for (int m = 0; m < n; ++m) x = step(f, x, s);
      ++per[b][std::size_t(annulus_of(x, f.dim()))];
    }
  });
  std::vector<uint64_t> total(std::size_t(kmax + 1), 0);
  for (const auto& p : per)
    for (std::size_t k = 0; k < p.size(); ++k) total[k] += p[k];
  return total;
}

}  // namespace

std::size_t nearest_giant(const ClusterDecomposition& dec) {
  std::size_t best = Box::npos;
  int best_norm = 0;
  for (std::size_t i : dec.giant_vertices()) {
    int r = linf_norm(dec.box.vertex(i), dec.box.d());
    if (best == Box::npos || r < best_norm) {
      best = i;
      best_norm = r;
    }
  }
  if (best == Box::npos) throw PreconditionError("the box has no giant component");
  return best;
}

RunResult anomaly_experiment(const ExperimentConfig& c) {
  c.validate();
  const auto t0 = Clock::now();
  ConductanceLaw law = load_law(c.law);
  RunResult r;
  r.experiment = "anomaly";
  r.seeds = c.seeds;
  r.config_digest = c.digest();
  r.threads = resolve_threads(c.threads);
  r.table = CsvTable({"seed", "d", "n", "walkers", "p_hat", "stderr", "scaled", "baseline_p_hat", "baseline_stderr",
                      "baseline_scaled", "ratio", "ratio_stderr", "ratio_lo95", "ratio_hi95", "rel_error", "warning"});
  if (c.d != 4) r.extra["warnings"].push_back("anomaly experiment is calibrated for d = 4");
  auto base = ConductanceField::lazy(c.d, ConductanceLaw::constant(), 0);
  for (uint64_t seed : c.seeds) {
    auto f = ConductanceField::lazy(c.d, law, seed);
    auto est = simulate_return_series(f, c.horizons, c.walkers, seed, c.threads);
    auto ref = simulate_return_series(base, c.horizons, c.walkers, seed ^ 0x6a09e667f3bcc909ULL, c.threads);
    for (std::size_t i = 0; i < est.size(); ++i) {
      const double n = est[i].n, p = est[i].p_hat, p0 = ref[i].p_hat;
      const double ratio = p / p0;
      const double rel = p > 0 ? est[i].stderr_ / p : INFINITY;
      const double rel0 = p0 > 0 ? ref[i].stderr_ / p0 : INFINITY;
      const double se = ratio * std::sqrt(rel * rel + rel0 * rel0);
      const bool warn = !(rel <= 0.5) || !(rel0 <= 0.5);
      r.table.row()
          .add(seed)
          .add(c.d)
          .add(est[i].n)
          .add(c.walkers)
          .add(p)
          .add(est[i].stderr_)
          .add(n * n * p)
          .add(p0)
          .add(ref[i].stderr_)
          .add(n * n * p0)
          .add(ratio)
          .add(se)
          .add(ratio - 1.96 * se)
          .add(ratio + 1.96 * se)
          .add(rel)
          .add(warn ? "infeasible_walker_budget" : "");
    }
  }
  r.wall_seconds = seconds_since(t0);
  return r;
}

RunResult annulus_profile(const ExperimentConfig& c) {
  c.validate();
  const auto t0 = Clock::now();
  ConductanceLaw law = load_law(c.law);
  RunResult r;
  r.experiment = "annulus_profile";
  r.seeds = c.seeds;
  r.config_digest = c.digest();
  r.threads = resolve_threads(c.threads);
  r.table = CsvTable({"seed", "d", "n", "k", "in_window", "method", "mass", "annulus_size", "contribution",
                      "window_count", "window_count_ok"});
  for (uint64_t seed : c.seeds) {
    for (int n : c.horizons) {
      std::vector<double> mass;
      std::string method;
      if (c.d <= 2) {
        auto f = ConductanceField::dense(Box(c.d, 2 * n + 1), law, seed);
        mass = annulus_lower_bound(f, n).mass;
        method = "exact";
      } else {
        auto counts = annulus_counts(ConductanceField::lazy(c.d, law, seed), n, c.walkers, seed, c.threads);
        for (uint64_t k : counts) mass.push_back(double(k) / double(c.walkers));
        method = "monte_carlo";
      }
      const auto z = window_annuli(n);
      const bool z_ok = double(z.size()) >= 0.25 * std::log(double(n));
      for (std::size_t k = 0; k < mass.size(); ++k) {
        const double size = double(annulus_size(annulus(int(k)), c.d));
        r.table.row()
            .add(seed)
            .add(c.d)
            .add(n)
            .add(int(k))
            .add(k >= 1 && in_window(n, int(k)))
            .add(method)
            .add(mass[k])
            .add(size)
            .add(mass[k] * mass[k] / size)
            .add(uint64_t(z.size()))
            .add(z_ok);
      }
    }
  }
  r.wall_seconds = seconds_since(t0);
  return r;
}

RunResult moment_experiment(const ExperimentConfig& c) {
  c.validate();
  if (c.boxes.empty()) throw ConfigError("moment experiment needs a box size");
  const auto t0 = Clock::now();
  ConductanceLaw law = load_law(c.law);
  RunResult r;
  r.experiment = "rnk_moments";
  r.seeds = c.seeds;
  r.config_digest = c.digest();
  r.threads = resolve_threads(c.threads);
  r.table = CsvTable({"seed", "d", "box", "n", "k", "in_window", "rho_n", "target_mean", "mean", "stderr_mean",
                      "target_second", "second", "stderr_second", "truncated_mean", "freq_ek", "beta_hat",
                      "ratio", "walkers"});
  r.extra["beta_note"] = "beta_hat is the empirical stand-in for the time-change constant";
  for (uint64_t seed : c.seeds) {
    auto f = ConductanceField::dense(Box(c.d, c.boxes[0]), law, seed);
    auto dec = decompose(f, c.alpha);
    const double beta = estimate_beta(f, dec, c.beta_factor, HolePolicy::finite_box);
    const Vertex start = f.box().vertex(nearest_giant(dec));
    r.extra["start"][std::to_string(seed)] = to_string(start, c.d);
    for (int n : c.horizons) {
      if (n < 4) throw ConfigError("trap scale n must be at least 4");
      std::vector<int> ks = c.annuli.empty() ? window_annuli(n) : c.annuli;
      const double rho = rho_n(law, n, c.d);
      for (int k : ks) {
        auto s = sample_rnk(f, dec, n, k, beta, c.walkers, seed, c.threads, start);
        const double target = rho * t_k(k);
        r.table.row()
            .add(seed)
            .add(c.d)
            .add(c.boxes[0])
            .add(n)
            .add(k)
            .add(in_window(n, k))
            .add(rho)
            .add(target)
            .add(s.mean)
            .add(s.stderr_mean)
            .add(target * target)
            .add(s.second)
            .add(s.stderr_second)
            .add(s.mean_truncated)
            .add(s.freq_ek)
            .add(beta)
            .add(s.mean / target)
            .add(c.walkers);
      }
    }
  }
  r.wall_seconds = seconds_since(t0);
  return r;
}

namespace {

struct ExactInstance {
  ConductanceField f;
  ClusterDecomposition dec;
};

ExactInstance make_instance(const ExactOptions& o) {
  if (o.box < 1) throw ConfigError("box half width must be positive");
  if (!(o.alpha > 0 && o.alpha <= 1)) throw ConfigError("alpha must lie in (0, 1]");
  auto f = ConductanceField::dense(Box(o.d, o.box), load_law(o.law), o.seed);
  auto dec = decompose(f, o.alpha);
  if (dec.giant_size == 0) throw PreconditionError("the box has no giant component");
  return {std::move(f), std::move(dec)};
}

RunResult exact_result(const ExactOptions& o, const std::string& name, std::vector<std::string> cols) {
  RunResult r;
  r.experiment = name;
  r.seeds = {o.seed};
  r.config_digest = sha256_hex(nlohmann::json{{"law", o.law}, {"seed", o.seed}, {"d", o.d}, {"box", o.box},
                                              {"alpha", o.alpha}, {"radius", o.radius}, {"probes", o.probes},
                                              {"op", name}}
                                   .dump());
  r.table = CsvTable(std::move(cols));
  return r;
}

double nash_radius(const ExactOptions& o) { return o.radius > 0 ? o.radius : std::max(1, o.box - 1); }

// T = R^2 / (24 c6)^2 with c6 measured from the center.
double nash_time(const FiniteChain& c, const ClusterDecomposition& dec, std::size_t center, double R) {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.5 * i);
  double c6 = nash_c6(c, dec, center, grid);
  if (!(c6 > 0)) return 1.0;
  return R * R / ((24 * c6) * (24 * c6));
}

}  // namespace

RunResult exact_kernel(const ExactOptions& o, const std::string& op) {
  const auto t0 = Clock::now();
  RunResult r;
  if (op == "annulus-bound") {
    r = exact_result(o, op, {"n", "lhs", "rhs", "gap", "holds"});
    auto f = ConductanceField::dense(Box(o.d, o.box), load_law(o.law), o.seed);
    const int n_max = (o.box - 1) / 2;
    if (n_max < 1) throw ConfigError("annulus-bound needs box >= 3");
    for (const auto& b : annulus_lower_bound_series(f, n_max))
      r.table.row().add(b.n).add(b.lhs).add(b.rhs).add(b.gap()).add(b.gap() >= -1e-10);
  } else if (op == "green-id") {
    r = exact_result(o, op, {"states", "killed", "identity_error", "holds", "cs_excess_raw", "cs_excess_symmetric"});
    auto in = make_instance(o);
    auto g = make_greens_triple(in.f, in.dec, HolePolicy::finite_box);
    std::size_t killed = 0;
    for (auto k : g.killed) killed += k;
    double err = greens_identity_check(g);
    double raw = std::max({cauchy_schwarz_excess(g.hat->matrix()), cauchy_schwarz_excess(g.bar->matrix()),
                           cauchy_schwarz_excess(g.tilde->matrix())});
    double sym = std::max({cauchy_schwarz_excess(symmetric_green_kernel(*g.hat)),
                           cauchy_schwarz_excess(symmetric_green_kernel(*g.bar)),
                           cauchy_schwarz_excess(symmetric_green_kernel(*g.tilde))});
    r.table.row().add(uint64_t(g.induced->size())).add(uint64_t(killed)).add(err).add(err <= 1e-8).add(raw).add(sym);
  } else if (op == "green-cmp") {
    r = exact_result(o, op, {"probe", "hat", "bound", "holds", "operator_gap", "order_holds"});
    auto in = make_instance(o);
    auto g = make_greens_triple(in.f, in.dec, HolePolicy::finite_box);
    const std::size_t n = g.induced->size();
    for (int p = 0; p < o.probes; ++p) {
      WalkerStream s(o.seed, uint64_t(p));
      std::vector<double> f(n), h(n);
      for (std::size_t i = 0; i < n; ++i) {
        f[i] = s.uniform() < 0.3 ? s.uniform() : 0.0;
        h[i] = 2 * s.uniform() - 1;
      }
      auto cmp = greens_comparison_check(g, f);
      double gap = operator_order_gap(g, h);
      r.table.row().add(p).add(cmp.hat).add(cmp.bound).add(cmp.holds()).add(gap).add(gap >= -1e-10);
    }
  } else if (op == "nash") {
    r = exact_result(o, op, {"t", "lhs", "rhs1", "rhs2", "rhs3", "boundary", "slack", "holds"});
    auto in = make_instance(o);
    auto c = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
    std::size_t center = std::size_t(c.state_of[nearest_giant(in.dec)]);
    const double R = nash_radius(o);
    auto b = nash_bundle(c, in.dec, center, center, R);
    const double T = nash_time(c, in.dec, center, R);
    for (int i = 0; i < 10; ++i) {
      auto chk = nash_derivative_check(b, in.dec, T * (1 + i / 9.0));
      r.table.row().add(chk.t).add(chk.lhs).add(chk.rhs1).add(chk.rhs2).add(chk.rhs3).add(chk.boundary)
          .add(chk.slack()).add(chk.holds());
    }
  } else if (op == "poincare") {
    r = exact_result(o, op, {"probe", "ratio"});
    auto in = make_instance(o);
    auto c = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
    std::size_t center = std::size_t(c.state_of[nearest_giant(in.dec)]);
    auto b = nash_bundle(c, in.dec, center, center, nash_radius(o));
    std::size_t in_ball = 0;
    for (auto v : b.in_ball) in_ball += v;
    if (in_ball < 2) throw PreconditionError("the Nash ball needs at least two states");
    double lo = INFINITY;
    for (int p = 0; p < o.probes; ++p) {
      WalkerStream s(o.seed, uint64_t(p));
      std::vector<double> f(c.size(), 0.0);
      for (std::size_t i = 0; i < c.size(); ++i)
        if (b.in_ball[i]) f[i] = 2 * s.uniform() - 1;
      double ratio = poincare_ratio(b, f);
      lo = std::min(lo, ratio);
      r.table.row().add(p).add(ratio);
    }
    r.extra["min_ratio"] = lo;
  } else if (op == "decay") {
    r = exact_result(o, op, {"ell", "profile"});
    auto in = make_instance(o);
    auto c = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
    std::size_t z = std::size_t(c.state_of[nearest_giant(in.dec)]);
    auto prof = diagonal_decay_profile(c, z, std::size_t(o.box) * std::size_t(o.box));
    for (std::size_t l = 0; l < prof.size(); ++l) r.table.row().add(uint64_t(l + 1)).add(prof[l]);
  } else {
    throw ConfigError("unknown exact-kernel op '" + op + "'");
  }
  r.wall_seconds = seconds_since(t0);
  return r;
}

RunResult nash_check(const ExactOptions& o) {
  const auto t0 = Clock::now();
  RunResult r = exact_result(o, "nash-check", {"check", "probe", "t", "lhs", "rhs", "trivial", "holds"});
  auto in = make_instance(o);
  auto c = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
  std::size_t center = std::size_t(c.state_of[nearest_giant(in.dec)]);
  const double R = nash_radius(o);
  auto b = nash_bundle(c, in.dec, center, center, R);
  const double T = nash_time(c, in.dec, center, R);
  r.extra["T"] = T;
  r.extra["R"] = R;
  for (int i = 0; i < 10; ++i) {
    auto chk = nash_derivative_check(b, in.dec, T * (1 + i / 9.0));
    r.table.row().add("derivative").add(i).add(chk.t).add(chk.lhs).add(chk.rhs1 - chk.rhs2 - chk.rhs3).add(false)
        .add(chk.holds());
  }
  std::vector<std::size_t> ball;
  for (std::size_t s = 0; s < c.size(); ++s)
    if (b.in_ball[s]) ball.push_back(s);
  for (int p = 0; p < o.probes; ++p) {
    WalkerStream s(o.seed, uint64_t(p));
    std::size_t z = ball[std::size_t(s.next_u64() % ball.size())];
    double t = T * (1 + s.uniform());
    auto bz = nash_bundle(c, in.dec, center, z, R);
    auto v = nash_variance_check(bz, in.dec, t, nash_c_tilde(bz, T));
    r.table.row().add("variance").add(p).add(t).add(v.var).add(v.rhs).add(v.trivial).add(v.holds());
  }
  std::vector<double> ts;
  for (int i = 1; i <= 40; ++i) ts.push_back(T * 0.25 * i);
  auto m = nash_monotonicity(b, ts);
  r.table.row().add("monotonicity").add(0).add(ts.back()).add(m.worst_drop).add(0.0).add(false)
      .add(m.worst_drop <= 1e-9);
  r.extra["c8"] = m.c8;
  r.extra["c9"] = m.c9;
  r.wall_seconds = seconds_since(t0);
  return r;
}

}  // namespace rcm
