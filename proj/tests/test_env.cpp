#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rcm/env/annulus.hpp"
#include "rcm/env/hash.hpp"
#include "rcm/env/traps.hpp"
#include "rcm/error.hpp"

using namespace rcm;

namespace {

Vertex v2(int a, int b) {
  Vertex v;
  v[0] = a;
  v[1] = b;
  return v;
}

}  // namespace

TEST_CASE("pi_omega on homogeneous and hand-built fields") {
  auto f4 = ConductanceField::lazy(4, ConductanceLaw::constant(), 1);
  CHECK(f4.pi(origin()) == 8.0);
  auto f2 = ConductanceField::lazy(2, ConductanceLaw::constant(), 1);
  CHECK(f2.pi(v2(5, -3)) == 4.0);

  FieldBuilder b(Box(2, 3), 0.25);
  b.set(origin(), v2(1, 0), 1.0);
  auto f = b.build();
  CHECK(f.pi(origin()) == doctest::Approx(1.0 + 3 * 0.25).epsilon(1e-15));
  CHECK_THROWS_AS(f.pi(v2(4, 0)), PreconditionError);
}

TEST_CASE("rho_n and theta") {
  ConductanceLaw law("l", {{1.0, 0.9}, {1.0 / 64, 0.1}});
  // 0.9 * 0.1^14 in exact decimal
  CHECK(rho_n(law, 64, 4) == doctest::Approx(9e-15).epsilon(1e-12));
  CHECK(rho_n(ConductanceLaw::constant(), 8, 2) == 0.0);
  CHECK(theta(4) == doctest::Approx(1.0 / 28));
  CHECK(theta(1) == doctest::Approx(0.25));
  CHECK(theta(5) == doctest::Approx(1.0 / 36));
}

TEST_CASE("rho_n grows when mass moves into the window") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    double n = 4 + std::floor(u(gen) * 60);
    double p_strong = 0.2 + 0.6 * u(gen);
    double p_win = (1 - p_strong) * u(gen);
    double p_low = 1 - p_strong - p_win;
    double shift = p_low * u(gen);
    int d = 1 + int(u(gen) * 4);
    ConductanceLaw a("a", {{1.0, p_strong}, {1.5 / n, p_win}, {0.1 / n, p_low}});
    ConductanceLaw b("b", {{1.0, p_strong}, {1.5 / n, p_win + shift}, {0.1 / n, p_low - shift}});
    CHECK(rho_n(b, n, d) >= rho_n(a, n, d));
  }
}

TEST_CASE("law validation") {
  CHECK_THROWS_AS(ConductanceLaw("x", {{0.5, 0.5}, {1.0, 0.5}}), ConfigError);
  CHECK_THROWS_AS(ConductanceLaw("x", {{1.0, 0.5}, {0.5, 0.4}}), ConfigError);
  CHECK_THROWS_AS(ConductanceLaw("x", {{1.5, 1.0}}), ConfigError);
  auto law = ConductanceLaw::load(R"({"id":"t","atoms":[[1,0.7],[0.015625,0.3]]})");
  CHECK(law.atoms().size() == 2);
  CHECK(ConductanceLaw::from_json(law.to_json()).atoms()[1].value == 0.015625);
}

TEST_CASE("theorem1 law: default sequences violate the mass constraint") {
  CHECK_THROWS_AS(ConductanceLaw::load(R"({"family":"theorem1","d":4})"), ConfigError);
}

TEST_CASE("theorem1 law with tabulated lambda satisfies rho^2 >= lambda^-1 / 4") {
  nlohmann::json spec = {{"family", "theorem1"},
                         {"n_seq", {{"kind", "table"}, {"values", {4, 16, 64}}}},
                         {"lambda", {{"kind", "table"}, {"values", {std::ldexp(1.0, 84), std::ldexp(1.0, 112),
                                                                    std::ldexp(1.0, 140)}}}}};
  Theorem1Law t = theorem1_law(spec, 4);
  CHECK(t.law.atoms().front().prob == doctest::Approx(1 - 0.125 - 0.0625 - 0.03125));
  for (std::size_t l = 0; l < t.n_seq.size(); ++l) {
    double r = rho_n(t.law, t.n_seq[l], 4);
    CHECK(r * r >= 0.25 / t.lambda[l]);
  }
}

TEST_CASE("annuli: closed-form sizes match enumeration and partition Z^d") {
  CHECK(annulus_size(annulus(1), 4) == 80);
  CHECK(annulus_members(annulus(1), 4).size() == 80);
  auto b1 = annulus_members(annulus(1), 1);
  CHECK(b1.size() == 2);
  for (int d = 1; d <= 3; ++d)
    for (int k = 0; k <= 5; ++k)
      for (bool in : {false, true}) CHECK(annulus_size(annulus(k, in), d) == annulus_members(annulus(k, in), d).size());
  CHECK(std::pow(t_k(3), 2) / double(annulus_size(annulus(3), 4)) >= 1.0 / 16);
  for (int k = 1; k <= 12; ++k) CHECK(std::pow(t_k(k), 2) / double(annulus_size(annulus(k), 4)) >= 1.0 / 16);
  Box box(3, 20);
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex x = box.vertex(i);
    int hits = 0;
    for (int k = 0; k <= 6; ++k) hits += in_annulus(x, 3, annulus(k));
    CHECK(hits == 1);
    CHECK(in_annulus(x, 3, annulus(annulus_of(x, 3))));
    for (int k = 0; k <= 6; ++k)
      if (in_annulus(x, 3, annulus(k, true))) CHECK(in_annulus(x, 3, annulus(k)));
  }
}

TEST_CASE("field determinism and lazy/dense agreement") {
  auto law = ConductanceLaw("l", {{1.0, 0.5}, {0.3, 0.3}, {0.01, 0.2}});
  auto lazy = ConductanceField::lazy(3, law, 99);
  Box box(3, 6);
  auto dense = lazy.materialize(box);
  auto dense2 = ConductanceField::dense(box, law, 99);
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex x = box.vertex(i);
    for (int a = 0; a < 3; ++a) {
      if (box.neighbor(i, 2 * a) == Box::npos) continue;
      CHECK(dense.up(x, a) == lazy.up(x, a));
      CHECK(dense2.up(x, a) == lazy.up(x, a));
    }
  }
  Vertex far;
  far[0] = 1 << 20;
  far[1] = -(1 << 22);
  CHECK(lazy.up(far, 2) == lazy.up(far, 2));
}

TEST_CASE("law fidelity over 10^6 edges") {
  auto law = ConductanceLaw("l", {{1.0, 0.55}, {0.4, 0.3}, {0.02, 0.15}});
  for (int d : {2, 4}) {
    auto f = ConductanceField::lazy(d, law, 2024);
    std::vector<double> counts(3, 0);
    const long total = 1000000;
    for (long e = 0; e < total; ++e) {
      Vertex x;
      const long base = long(std::pow(double(total), 1.0 / d)) + 2;
      long r = e / d;
      for (int a = 0; a < d; ++a) {
        x[a] = int(r % base) - int(base / 2);
        r /= base;
      }
      double w = f.up(x, int(e % d));
      for (int s = 0; s < 3; ++s)
        if (w == law.atoms()[s].value) counts[s]++;
    }
    for (int s = 0; s < 3; ++s) {
      double p = law.atoms()[s].prob;
      double se = std::sqrt(p * (1 - p) / double(total));
      CHECK(std::abs(counts[s] / double(total) - p) < 4 * se);
    }
  }
}

TEST_CASE("trap census: hand-built examples") {
  const double n = 16;
  Box box(2, 4);
  FieldBuilder b(box, 1.0);
  Vertex y = origin(), z = v2(1, 0);
  for (const Vertex& u : {v2(-1, 0), v2(0, 1), v2(0, -1)}) b.set(y, u, 1.5 / n);
  for (const Vertex& u : {v2(2, 0), v2(1, 1), v2(1, -1)}) b.set(z, u, 1.5 / n);
  auto f = b.build();
  TrapCensus c = trap_census(f, n);
  REQUIRE(c.trap_edges.size() == 1);
  std::set<Vertex> flagged;
  for (auto& r : c.records) flagged.insert(r.x);
  std::set<Vertex> expect{v2(-1, 0), v2(0, 1), v2(0, -1), v2(2, 0), v2(1, 1), v2(1, -1)};
  CHECK(flagged == expect);
  CHECK(directed_trap_indicator(f, v2(2, 0), n));
  CHECK_FALSE(directed_trap_indicator(f, v2(-1, 0), n));

  b.set(z, v2(2, 0), 3.0 / n);
  CHECK(trap_census(b.build(), n).records.empty());
  CHECK(trap_census(ConductanceField::dense(box, ConductanceLaw::constant(), 3), n).records.empty());
  CHECK_THROWS_AS(trap_census(f, 3.0), PreconditionError);
}

TEST_CASE("directed trap indicator") {
  const double n = 8;
  Box box(2, 5);
  FieldBuilder b(box, 1.0);
  Vertex x = v2(2, 1), y = v2(1, 1), z = v2(0, 1);
  b.set_incident(y, 1.5 / n).set_incident(z, 1.5 / n).set(y, z, 0.75);
  auto f = b.build();
  CHECK(directed_trap_indicator(f, x, n));
  CHECK_FALSE(directed_trap_indicator(f, v2(-1, 1), n));  // trap at x + e1
  CHECK_FALSE(directed_trap_indicator(ConductanceField::dense(box, ConductanceLaw::constant(), 1), x, n));
  auto flags = oracle::brute_trap_flags(f, n);
  CHECK(flags.count(x) == 1);
}

TEST_CASE("trap census equals brute force on 10^3 random small fields") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const double n = 8;
    int d = 1 + trial % 3;
    int L = d == 3 ? 2 : 3;
    double pw = 0.3 + 0.6 * double(trial % 7) / 6;
    ConductanceLaw law("t", {{1.0, (1 - pw) / 2}, {0.6, (1 - pw) / 2}, {1.5 / n, pw}});
    auto f = ConductanceField::dense(Box(d, L), law, gen());
    auto census = trap_census(f, n);
    std::set<Vertex> got;
    for (auto& r : census.records) got.insert(r.x);
    CHECK(got == oracle::brute_trap_flags(f, n));
    std::vector<Vertex> region;
    for (std::size_t i = 0; i < f.box().size(); ++i) region.push_back(f.box().vertex(i));
    auto regional = trap_census(f, region, n);
    std::set<Vertex> got2;
    for (auto& r : regional.records) got2.insert(r.x);
    CHECK(got2 == got);
    for (auto& r : census.records) {
      CHECK(l1_norm(r.x - r.y, d) == 1);
      CHECK(l1_norm(r.y - r.z, d) == 1);
    }
  }
}

TEST_CASE("walker stream is a pure function of (seed, walker, step)") {
  WalkerStream a(5, 17), b(5, 17), c(5, 18);
  for (int i = 0; i < 100; ++i) {
    uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
}
