#include "rcm/cli/validate.hpp"

#include <algorithm>
#include <cmath>

#include "rcm/env/hash.hpp"
#include "rcm/env/traps.hpp"
#include "rcm/error.hpp"
#include "rcm/graph/holes.hpp"
#include "rcm/kernel/annulus_bound.hpp"
#include "rcm/kernel/chain.hpp"
#include "rcm/kernel/chaining.hpp"
#include "rcm/kernel/comparison.hpp"
#include "rcm/kernel/heat.hpp"
#include "rcm/kernel/nash.hpp"
#include "rcm/kernel/poisson_window.hpp"
#include "rcm/walk/hiding.hpp"
#include "rcm/walk/trap_event.hpp"

namespace rcm {

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance},
                  {"cases", c.cases}, {"detail", c.detail}});
  return {{"schema_version", schema_version}, {"passed", passed()}, {"checks", cs}};
}

ValidationReport ValidationReport::from_json(const nlohmann::json& j) {
  ValidationReport r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    for (const auto& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("value").get<double>(),
                          c.at("tolerance").get<double>(), c.at("cases").get<std::size_t>(),
                          c.at("detail").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed validation report: ") + e.what());
  }
  return r;
}

namespace {

ConductanceLaw mixed_law() { return ConductanceLaw("mixed", {{1.0, 0.7}, {0.3, 0.1}, {0.02, 0.2}}); }

// Tracks the worst value of a defect that must stay below tol.
struct Defect {
  double worst = 0;
  std::size_t cases = 0;
  void see(double v) {
    worst = std::max(worst, v);
    ++cases;
  }
};

// Tracks the smallest slack of an inequality that must stay above -tol.
struct Slack {
  double worst = INFINITY;
  std::size_t cases = 0;
  void see(double v) {
    worst = std::min(worst, v);
    ++cases;
  }
};

CheckResult defect(const std::string& name, const Defect& d, double tol, std::string detail = "") {
  return {name, d.worst <= tol, d.worst, tol, d.cases, std::move(detail)};
}
CheckResult slack(const std::string& name, const Slack& s, double tol, std::string detail = "") {
  return {name, s.worst >= -tol, s.worst, tol, s.cases, std::move(detail)};
}

// Random box field with a trap planted at the origin's neighbor in direction dir.
ConductanceField planted_trap(uint64_t seed, double n) {
  Box box(2, 4);
  FieldBuilder b(box, 1.0);
  WalkerStream s(seed, 0);
  for (std::size_t i = 0; i < box.size(); ++i)
    for (int ax = 0; ax < 2; ++ax) {
      Vertex u = step_to(box.vertex(i), 2 * ax);
      if (box.contains(u)) b.set(box.vertex(i), u, 0.05 + 0.95 * s.uniform());
    }
  int dir = int(s.next_u64() % 4);
  Vertex y = step_to(origin(), dir), z = step_to(y, dir);
  for (const Vertex& a : {y, z})
    for (int e = 0; e < 4; ++e)
      if (box.contains(step_to(a, e))) b.set(a, step_to(a, e), (1 + s.uniform()) / n);
  b.set(y, z, 0.5 + 0.5 * s.uniform());
  return b.build("planted");
}

}  // namespace

ValidationReport validate_suite(const ValidateOptions& o) {
  ValidationReport rep;
  const uint64_t s0 = o.seed;

  {
    Defect bal, row;
    for (uint64_t k = 0; k < 4; ++k) {
      auto f = ConductanceField::dense(Box(2, 5), mixed_law(), s0 + k);
      auto dec = decompose(f, 0.25);
      for (ChainKind kind : {ChainKind::full, ChainKind::induced, ChainKind::lazy, ChainKind::unit}) {
        auto c = build_chain(f, kind, kind == ChainKind::full ? nullptr : &dec, HolePolicy::finite_box);
        if (o.inject_fault && k == 0 && kind == ChainKind::full) {
          // move mass inside one row: rows stay stochastic, the pair balance breaks
          std::size_t a = c.row_ptr[0], e = c.row_ptr[1];
          if (e - a >= 2) {
            c.val[a] += 0.1 * c.val[a + 1];
            c.val[a + 1] *= 0.9;
          }
        }
        bal.see(c.max_balance_defect());
        row.see(c.max_row_defect());
      }
    }
    rep.checks.push_back(defect("detailed_balance", bal, 1e-12));
    rep.checks.push_back(defect("row_sums", row, 1e-12));
  }

  {
    Defect semi;
    auto f = ConductanceField::dense(Box(2, 4), mixed_law(), s0);
    auto dec = decompose(f, 0.25);
    auto c = build_chain(f, ChainKind::induced, &dec, HolePolicy::finite_box);
    WalkerStream s(s0, 1);
    for (int p = 0; p < 10; ++p) {
      std::vector<double> mu(c.size());
      for (double& v : mu) v = s.uniform();
      std::size_t m = 1 + s.next_u64() % 6, n = 1 + s.next_u64() % 6;
      auto a = evolve(c, mu, m + n), b = evolve(c, evolve(c, mu, m), n);
      double e = 0, scale = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        e = std::max(e, std::abs(a[i] - b[i]));
        scale = std::max(scale, std::abs(a[i]));
      }
      semi.see(e / std::max(scale, 1e-300));
    }
    rep.checks.push_back(defect("semigroup", semi, 1e-10));
  }

  {
    Slack gap;
    for (int d : {1, 2}) {
      for (uint64_t k = 0; k < 5; ++k) {
        auto f = ConductanceField::dense(Box(d, 2 * 8 + 1), mixed_law(), s0 + 10 * k + uint64_t(d));
        for (const auto& b : annulus_lower_bound_series(f, 8)) gap.see(b.gap());
      }
    }
    rep.checks.push_back(slack("annulus_lower_bound", gap, 1e-10));
  }

  {
    Slack entry;
    for (uint64_t k = 0; k < 20; ++k)
      for (int n : {8, 16, 32}) {
        auto f = planted_trap(s0 * 1000 + k, n);
        auto t = trap_at(f, origin(), n);
        if (!t) throw NumericalError("planted trap not recognized");
        for (int ell = 0; 2 * ell < n; ++ell) {
          auto p = trap_event_probability(f, *t, n, ell, 1.0);
          entry.see(p.slack());
        }
      }
    rep.checks.push_back(slack("trap_entry_bound", entry, 0.0));
  }

  {
    Slack hide;
    for (uint64_t k = 0; k < 5; ++k) {
      auto f = ConductanceField::dense(Box(2, 6), mixed_law(), s0 + 100 + k);
      const double alpha = 0.5;
      auto dec = decompose(f, alpha);
      auto ht = hole_hitting_times(f, dec, HolePolicy::finite_box);
      for (std::size_t x : dec.giant_vertices()) {
        std::size_t g = ht.holes.g_size(x);
        if (g > 0) hide.see(4.0 * 2 / alpha * double(g) - expected_hiding_time(f, ht, x));
      }
    }
    rep.checks.push_back(slack("hiding_time_bound", hide, 0.0));
  }

  {
    Defect id, cs;
    Slack form, order;
    for (uint64_t k = 0; k < 3; ++k) {
      auto f = ConductanceField::dense(Box(2, 5), mixed_law(), s0 + 200 + k);
      auto dec = decompose(f, 0.25);
      auto g = make_greens_triple(f, dec, HolePolicy::finite_box);
      id.see(greens_identity_check(g));
      for (const GreensOperator* op : {g.hat.get(), g.bar.get(), g.tilde.get()})
        cs.see(std::max(0.0, cauchy_schwarz_excess(symmetric_green_kernel(*op))));
      WalkerStream s(s0, 300 + k);
      const std::size_t n = g.induced->size();
      for (int p = 0; p < 10; ++p) {
        std::vector<double> fv(n), h(n);
        for (std::size_t i = 0; i < n; ++i) {
          fv[i] = s.uniform() < 0.3 ? s.uniform() : 0.0;
          h[i] = 2 * s.uniform() - 1;
        }
        auto cmp = greens_comparison_check(g, fv);
        form.see(cmp.bound - cmp.hat);
        order.see(operator_order_gap(g, h));
      }
    }
    rep.checks.push_back(defect("green_identity", id, 1e-8));
    rep.checks.push_back(slack("green_form_comparison", form, 1e-10));
    rep.checks.push_back(slack("operator_order", order, 1e-10));
    rep.checks.push_back(defect("green_symmetric_cauchy_schwarz", cs, 1e-10, "kernel G(x,y)/w(y)"));
  }

  {
    Slack der;
    auto f = ConductanceField::dense(Box(2, 5), mixed_law(), s0 + 400);
    auto dec = decompose(f, 0.25);
    auto c = build_chain(f, ChainKind::induced, &dec, HolePolicy::finite_box);
    std::size_t center = 0;
    int best = 1 << 30;
    for (std::size_t s = 0; s < c.size(); ++s)
      if (linf_norm(c.vertex(s), 2) < best) {
        best = linf_norm(c.vertex(s), 2);
        center = s;
      }
    auto b = nash_bundle(c, dec, center, center, 4);
    for (double t : {0.05, 0.5, 2.0, 8.0}) {
      auto chk = nash_derivative_check(b, dec, t);
      der.see((chk.lhs - (chk.rhs1 - chk.rhs2 - chk.rhs3)) / std::max(1.0, chk.slack(1.0)));
    }
    rep.checks.push_back(slack("nash_derivative", der, 1e-8, "slack relative to the largest term"));
  }

  {
    Defect norm;
    for (double t : {16.0, 64.0, 256.0}) {
      auto w = poisson_window_weights(std::size_t(3 * t), t);
      norm.see(std::abs(w.total - t / 3));
    }
    rep.checks.push_back(defect("poisson_window_total", norm, 1e-10));
  }

  {
    Slack th;
    nlohmann::json spec = {{"family", "theorem1"},
                           {"n_seq", {{"kind", "table"}, {"values", {4, 16, 64}}}},
                           {"lambda", {{"kind", "table"},
                                       {"values", {std::ldexp(1.0, 84), std::ldexp(1.0, 112), std::ldexp(1.0, 140)}}}}};
    Theorem1Law t = theorem1_law(spec, 4);
    for (std::size_t l = 0; l < t.n_seq.size(); ++l) {
      double r = rho_n(t.law, t.n_seq[l], 4);
      th.see((r * r - 0.25 / t.lambda[l]) * t.lambda[l]);
    }
    rep.checks.push_back(slack("theorem1_rho_bound", th, 0.0, "rho^2 lambda - 1/4"));
  }
  return rep;
}

}  // namespace rcm
