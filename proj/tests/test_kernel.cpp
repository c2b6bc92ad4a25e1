#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rcm/error.hpp"
#include "rcm/graph/cluster.hpp"
#include "rcm/graph/distance.hpp"
#include "rcm/kernel/annulus_bound.hpp"
#include "rcm/kernel/chain.hpp"
#include "rcm/kernel/chaining.hpp"
#include "rcm/kernel/comparison.hpp"
#include "rcm/kernel/greens.hpp"
#include "rcm/kernel/heat.hpp"
#include "rcm/kernel/nash.hpp"
#include "rcm/kernel/poisson_window.hpp"
#include "rcm/kernel/rnk_exact.hpp"

using namespace rcm;

namespace {

Vertex v1(int a) {
  Vertex v;
  v[0] = a;
  return v;
}
Vertex v2(int a, int b) {
  Vertex v;
  v[0] = a;
  v[1] = b;
  return v;
}

ConductanceLaw mixed_law() { return ConductanceLaw("m", {{1.0, 0.7}, {0.3, 0.1}, {0.02, 0.2}}); }

struct Instance {
  ConductanceField f;
  ClusterDecomposition dec;
};

Instance random_instance(int d, int L, uint64_t seed, double alpha = 0.25) {
  auto f = ConductanceField::dense(Box(d, L), mixed_law(), seed);
  auto dec = decompose(f, alpha);
  return {std::move(f), std::move(dec)};
}

// q_t through the eigendecomposition of the symmetrized kernel.
Eigen::MatrixXd spectral_q(const FiniteChain& c, double t) {
  Eigen::MatrixXd k = dense_matrix(c);
  const long n = k.rows();
  Eigen::VectorXd sw(n);
  for (long i = 0; i < n; ++i) sw(i) = std::sqrt(c.weights[std::size_t(i)]);
  Eigen::MatrixXd s = sw.asDiagonal() * k * sw.cwiseInverse().asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  Eigen::VectorXd e = (t * (es.eigenvalues().array() - 1)).exp();
  Eigen::MatrixXd m = es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
  Eigen::MatrixXd p = sw.cwiseInverse().asDiagonal() * m * sw.asDiagonal();
  for (long y = 0; y < n; ++y) p.col(y) /= c.weights[std::size_t(y)];
  return p;
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> r(std::size_t(m.rows()), std::vector<double>(std::size_t(m.cols())));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) r[std::size_t(i)][std::size_t(j)] = m(i, j);
  return r;
}

// Killed Green's matrix by dense Gaussian elimination on (I - K) over the free states.
Eigen::MatrixXd green_by_elimination(const FiniteChain& c, const std::vector<uint8_t>& killed) {
  Eigen::MatrixXd k = dense_matrix(c);
  std::vector<std::size_t> free;
  for (std::size_t s = 0; s < c.size(); ++s)
    if (!killed[s]) free.push_back(s);
  std::vector<std::vector<double>> a(free.size(), std::vector<double>(free.size()));
  for (std::size_t i = 0; i < free.size(); ++i)
    for (std::size_t j = 0; j < free.size(); ++j) a[i][j] = (i == j) - k(long(free[i]), long(free[j]));
  auto inv = oracle::gauss_inverse(a);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(long(c.size()), long(c.size()));
  for (std::size_t i = 0; i < free.size(); ++i)
    for (std::size_t j = 0; j < free.size(); ++j) g(long(free[i]), long(free[j])) = inv[i][j];
  return g;
}

}  // namespace

TEST_CASE("chains of every kind are stochastic and reversible") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto in = random_instance(2, 6, seed);
    for (auto kind : {ChainKind::full, ChainKind::induced, ChainKind::lazy, ChainKind::unit}) {
      auto c = build_chain(in.f, kind, &in.dec, HolePolicy::finite_box);
      CHECK(c.max_row_defect() <= 1e-12);
      CHECK(c.max_balance_defect() <= 1e-12);
      for (double v : c.val) CHECK(v >= 0);
    }
    auto lazy = build_chain(in.f, ChainKind::lazy, &in.dec);
    for (std::size_t s = 0; s < lazy.size(); ++s)
      CHECK(lazy.entry(s, s) == doctest::Approx(1 - in.dec.alpha * lazy.degree[s] / lazy.pi[s]).epsilon(1e-14));
  }
}

TEST_CASE("constant field: full, unit and induced chains coincide; lazy diagonal is one half") {
  Box box(2, 4);
  auto f = ConductanceField::dense(box, ConductanceLaw::constant(1.0), 3);
  auto dec = decompose(f, 0.5);
  REQUIRE(dec.giant_size == box.size());
  auto full = build_chain(f, ChainKind::full);
  auto unit = build_chain(f, ChainKind::unit, &dec);
  auto ind = build_chain(f, ChainKind::induced, &dec);
  auto lazy = build_chain(f, ChainKind::lazy, &dec);
  CHECK((dense_matrix(full) - dense_matrix(unit)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((dense_matrix(full) - dense_matrix(ind)).cwiseAbs().maxCoeff() <= 1e-15);
  for (std::size_t s = 0; s < lazy.size(); ++s) CHECK(lazy.entry(s, s) == doctest::Approx(0.5));
}

TEST_CASE("induced chain matches excursion-by-excursion absorption") {
  // planted two-site hole with asymmetric weak edges, then random fields
  FieldBuilder fb(Box(2, 3), 1.0);
  fb.set(v2(0, 0), v2(1, 0), 0.6);
  for (const Vertex& x : {v2(0, 0), v2(1, 0)}) {
    for (int dir = 0; dir < 4; ++dir) {
      Vertex y = step_to(x, dir);
      if (y == v2(0, 0) || y == v2(1, 0)) continue;
      fb.set(x, y, 0.05 + 0.03 * dir + 0.01 * x[0]);
    }
  }
  std::vector<ConductanceField> fields;
  fields.push_back(fb.build("planted"));
  for (uint64_t seed = 1; seed <= 6; ++seed) fields.push_back(ConductanceField::dense(Box(2, 4), mixed_law(), seed));
  int idx = 0;
  for (const auto& f : fields) {
    auto dec = decompose(f, idx == 0 ? 0.7 : 0.25);
    auto c = build_chain(f, ChainKind::induced, &dec, HolePolicy::finite_box);
    const Box& box = f.box();
    auto nb = [&](const Vertex& v) { return oracle::scan_neighbors(box, v); };
    auto w = [&](const Vertex& a, const Vertex& b) { return oracle::weight(f, a, b); };
    auto on = [&](const Vertex& v) { return dec.on_giant(box.index(v)); };
    double worst = 0;
    for (std::size_t s = 0; s < c.size(); ++s) {
      auto row = oracle::induced_row_by_iteration(c.vertex(s), nb, w, on);
      double mass = 0;
      for (const auto& [y, p] : row) {
        worst = std::max(worst, std::abs(c.entry(s, std::size_t(c.state(y))) - p));
        mass += p;
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(worst <= 1e-12);
    ++idx;
  }
}

TEST_CASE("holes touching the box boundary are rejected by default") {
  FieldBuilder fb(Box(1, 3), 1.0);
  fb.set(v1(2), v1(3), 0.01);
  auto f = fb.build("edge-hole");
  auto dec = decompose(f, 0.5);
  CHECK_THROWS_AS(build_chain(f, ChainKind::induced, &dec), PreconditionError);
  CHECK_NOTHROW(build_chain(f, ChainKind::induced, &dec, HolePolicy::finite_box));
}

TEST_CASE("discrete heat kernel basics") {
  Box box(2, 4);
  auto f = ConductanceField::dense(box, ConductanceLaw::constant(1.0), 1);
  auto c = build_chain(f, ChainKind::full);
  std::size_t z = std::size_t(c.state(origin()));
  auto k0 = heat_kernel(c, z, 0);
  CHECK(k0.values[z] == 1.0);
  CHECK(std::accumulate(k0.values.begin(), k0.values.end(), 0.0) == 1.0);
  CHECK(heat_kernel(c, z, 2).values[z] == doctest::Approx(0.25).epsilon(1e-15));

  // semigroup on random vectors
  auto in = random_instance(2, 5, 9);
  auto ind = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> mu(ind.size());
    for (double& x : mu) x = u(rng);
    std::size_t m = 1 + rng() % 7, n = 1 + rng() % 7;
    auto a = evolve(ind, evolve(ind, mu, m), n);
    auto b = evolve(ind, mu, m + n);
    for (std::size_t s = 0; s < mu.size(); ++s) CHECK(std::abs(a[s] - b[s]) <= 1e-10);
  }
}

TEST_CASE("continuous-time kernel agrees with the spectral route") {
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    auto in = random_instance(2, 4, seed);
    auto c = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
    for (double t : {0.3, 2.0, 17.5}) {
      Eigen::MatrixXd spec = spectral_q(c, t);
      for (std::size_t z = 0; z < c.size(); z += 7) {
        auto q = ct_heat_kernel(c, z, t).values;
        double mass = 0;
        for (std::size_t y = 0; y < c.size(); ++y) {
          CHECK(std::abs(q[y] - spec(long(z), long(y))) <= 1e-10);
          CHECK(q[y] > 0);
          mass += q[y] * c.weights[y];
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
    // symmetry q_t(x,y) = q_t(y,x)
    auto q = ct_kernel_matrix(c, 3.0);
    CHECK((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("Poisson terms cover all but the requested tail") {
  for (double t : {0.0, 0.01, 1.0, 7.3, 250.0, 4096.0}) {
    auto p = poisson_terms(t);
    double s = std::accumulate(p.w.begin(), p.w.end(), 0.0);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    if (t > 0) {
      // omitted mass below the first kept index, from the exact pmf
      double below = 0;
      for (std::size_t n = 0; n < p.first; ++n) below += std::exp(-t + n * std::log(t) - std::lgamma(n + 1.0));
      CHECK(below < 1e-14);
      double first = std::exp(-t + p.first * std::log(t) - std::lgamma(p.first + 1.0));
      CHECK(p.w[0] == doctest::Approx(first).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(poisson_terms(1e6, 1e-14, 100), NumericalError);
}

TEST_CASE("annulus lower bound: hand case, strictness, random fields, matrix-power lhs") {
  {
    auto f = ConductanceField::dense(Box(1, 3), ConductanceLaw::constant(1.0), 1);
    auto b = annulus_lower_bound(f, 1);
    CHECK(b.lhs == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b.rhs == doctest::Approx(0.5).epsilon(1e-15));
  }
  {
    auto f = ConductanceField::dense(Box(2, 33), ConductanceLaw::constant(1.0), 1);
    auto series = annulus_lower_bound_series(f, 16);
    for (const auto& b : series) {
      CHECK(b.gap() > 0);
      // SRW in d=2: P^{2n}(0,0) = [C(2n,n)/4^n]^2
      double r = oracle::binom_ratio(2 * b.n, b.n);
      CHECK(b.lhs == doctest::Approx(r * r).epsilon(1e-12));
    }
  }
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    auto f = ConductanceField::dense(Box(2, 18), mixed_law(), seed);
    for (const auto& b : annulus_lower_bound_series(f, 8)) CHECK(b.lhs >= b.rhs - 1e-10);
  }
  // lhs against a dense matrix power on the box
  auto f = ConductanceField::dense(Box(2, 9), mixed_law(), 77);
  auto c = build_chain(f, ChainKind::full);
  Eigen::MatrixXd p = dense_matrix(c), pk = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  auto series = annulus_lower_bound_series(f, 4);
  long o = long(c.state(origin()));
  for (int n = 1; n <= 4; ++n) {
    pk = pk * p * p;
    CHECK(series[std::size_t(n - 1)].lhs == doctest::Approx(pk(o, o)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(annulus_lower_bound(f, 5), PreconditionError);
}

TEST_CASE("Green's function on a killed path") {
  // 3-path a-b-c (d=1 box, L=1) killed at c: unit walk from a is forced to b
  auto f = ConductanceField::dense(Box(1, 1), ConductanceLaw::constant(1.0), 1);
  auto dec = decompose(f, 0.5);
  auto unit = build_chain(f, ChainKind::unit, &dec);
  std::vector<uint8_t> killed(3, 0);
  killed[2] = 1;
  auto g = greens(unit, killed);
  // I - K on {a, b}: [[1, -1], [-1/2, 1]] so G = [[2, 2], [1, 2]]
  auto ref = oracle::gauss_inverse({{1, -1}, {-0.5, 1}});
  CHECK(g.entry(0, 0) == doctest::Approx(ref[0][0]));
  CHECK(g.entry(0, 0) == doctest::Approx(2.0));
  CHECK(g.entry(1, 0) == doctest::Approx(1.0));
  CHECK(quad_form(g, {0, 0, 0}) == 0.0);
  CHECK_THROWS_AS(greens(unit, std::vector<uint8_t>(3, 0)), PreconditionError);
}

TEST_CASE("Green's function: oracle agreement, Cauchy-Schwarz, symmetry, box monotonicity") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    auto in = random_instance(2, 5, seed);
    auto c = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
    auto killed = box_boundary_states(c);
    auto g = greens(c, killed);
    Eigen::MatrixXd m = g.matrix();
    Eigen::MatrixXd ref = green_by_elimination(c, killed);
    CHECK((m - ref).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    CHECK(m.minCoeff() >= 0);
    CHECK(cauchy_schwarz_excess(symmetric_green_kernel(g)) <= 1e-10);
    // on the raw matrix the bound carries the factor sqrt(w(y)/w(x)):
    // G(x,y)^2 = h(x,y) h(y,x) G(x,x) G(y,y) w(y)/w(x) with hitting probabilities h <= 1
    for (long x = 0; x < m.rows(); ++x)
      for (long y = 0; y < m.cols(); ++y) {
        if (m(x, x) == 0 || m(y, y) == 0) continue;
        double hxy = m(x, y) / m(y, y), hyx = m(y, x) / m(x, x);
        CHECK(hxy <= 1 + 1e-10);
        double w = c.weights[std::size_t(y)] / c.weights[std::size_t(x)];
        CHECK(m(x, y) * m(x, y) == doctest::Approx(hxy * hyx * m(x, x) * m(y, y) * w).epsilon(1e-9));
        CHECK(m(x, y) <= std::sqrt(m(x, x) * m(y, y) * w) * (1 + 1e-10));
      }
    // G(x,y)/w(y) is symmetric
    Eigen::MatrixXd sym = m;
    for (long y = 0; y < m.cols(); ++y) sym.col(y) /= c.weights[std::size_t(y)];
    CHECK((sym - sym.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * sym.cwiseAbs().maxCoeff());
  }
  // pushing the killed boundary outward never decreases an entry
  std::vector<Eigen::MatrixXd> byL;
  std::vector<FiniteChain> chains;
  for (int L : {3, 4, 6}) {
    auto f = ConductanceField::dense(Box(2, L), ConductanceLaw::constant(1.0), 1);
    auto dec = decompose(f, 0.5);
    chains.push_back(build_chain(f, ChainKind::unit, &dec));
  }
  auto entry = [&](std::size_t i, const Vertex& x, const Vertex& y) {
    auto g = greens(chains[i], box_boundary_states(chains[i]));
    return g.entry(std::size_t(chains[i].state(x)), std::size_t(chains[i].state(y)));
  };
  for (const auto& [x, y] : std::vector<std::pair<Vertex, Vertex>>{{origin(), origin()}, {v2(1, 0), v2(-2, 1)}}) {
    CHECK(entry(0, x, y) <= entry(1, x, y));
    CHECK(entry(1, x, y) <= entry(2, x, y));
  }
}

TEST_CASE("singular Green's systems are reported") {
  // a component cut off from the killed set: two isolated strong pieces, kill only one of them
  auto c = chain_from_dense({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}, {1, 1, 1, 1});
  CHECK_THROWS_AS(greens(c, {1, 0, 0, 0}), NumericalError);
  CHECK_NOTHROW(greens(c, {1, 0, 1, 0}));
}

TEST_CASE("Green identity between lazy and unit chains") {
  {
    auto f = ConductanceField::dense(Box(2, 4), ConductanceLaw::constant(1.0), 1);
    auto dec = decompose(f, 1.0);
    auto g = make_greens_triple(f, dec);
    CHECK((g.bar->matrix() - g.tilde->matrix()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(greens_identity_check(g) <= 1e-12);
  }
  {
    // single strong edge -1 -- 0 with a weak edge 0 -- 1; kill -1
    FieldBuilder fb(Box(1, 1), 1.0);
    fb.set(v1(0), v1(1), 0.1);
    auto f = fb.build("edge");
    auto dec = decompose(f, 0.5);
    REQUIRE(dec.giant_size == 2);
    auto g = make_greens_triple(f, dec, {1, 0}, HolePolicy::finite_box);
    CHECK(g.tilde->entry(1, 1) == doctest::Approx(1.0));
    CHECK(g.bar->entry(1, 1) == doctest::Approx(1.1 / 0.5));
    CHECK(greens_identity_check(g) <= 1e-12);
  }
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto in = random_instance(2, 7, seed);
    auto g = make_greens_triple(in.f, in.dec, HolePolicy::finite_box);
    CHECK(greens_identity_check(g) <= 1e-8);
  }
}

TEST_CASE("Green comparison and the operator order") {
  {
    // 5-path, constant field, killed at both ends; SRW escape from 0 has probability 1/2
    auto f = ConductanceField::dense(Box(1, 2), ConductanceLaw::constant(1.0), 1);
    auto dec = decompose(f, 1.0);
    auto g = make_greens_triple(f, dec);
    std::vector<double> e0(5, 0.0);
    e0[2] = 1;
    auto r = greens_comparison_check(g, e0);
    CHECK(r.hat == doctest::Approx(2.0));
    CHECK(r.bound == doctest::Approx(8.0));
    auto z = greens_comparison_check(g, std::vector<double>(5, 0.0));
    CHECK(z.hat == 0.0);
    CHECK(z.bound == 0.0);
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1), s(-1, 1);
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto in = random_instance(2, 6, seed);
    auto g = make_greens_triple(in.f, in.dec, HolePolicy::finite_box);
    const std::size_t n = g.induced->size();
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> f(n), h(n);
      for (std::size_t i = 0; i < n; ++i) {
        f[i] = u(rng) < 0.3 ? u(rng) : 0.0;
        h[i] = s(rng);
      }
      CHECK(greens_comparison_check(g, f).holds());
      CHECK(operator_order_gap(g, h) >= -1e-10);
    }
    CHECK_THROWS_AS(greens_comparison_check(g, std::vector<double>(n, -1.0)), PreconditionError);
  }
}

TEST_CASE("f_k quadratic form") {
  auto in = random_instance(2, 5, 3);
  auto g = make_greens_triple(in.f, in.dec, HolePolicy::finite_box);
  const std::size_t n = g.induced->size();
  Eigen::MatrixXd ref = green_by_elimination(*g.induced, g.killed);
  std::vector<double> fk(n, 0.0);
  CHECK(fk_quadform(*g.hat, fk, 2.0).value == 0.0);
  std::size_t a = 0, b = 0;
  for (std::size_t s = 0; s < n; ++s)
    if (!g.killed[s]) {
      if (a == 0) a = s;
      b = s;
    }
  fk[a] = 1;
  CHECK(fk_quadform(*g.hat, fk, 2.0).value == doctest::Approx(ref(long(a), long(a))));
  fk[b] = 1;
  auto two = fk_quadform(*g.hat, fk, 0.5);
  double expect = ref(long(a), long(a)) + ref(long(b), long(b)) + ref(long(a), long(b)) + ref(long(b), long(a));
  CHECK(two.value == doctest::Approx(expect));
  CHECK(two.near + two.far == doctest::Approx(two.value));
  double dist = euclidean_norm(g.induced->vertex(a) - g.induced->vertex(b), 2);
  CHECK(two.pair_sum == doctest::Approx(2.0 / (1.0 + std::pow(dist, 0))));

  // a planted trap next to the interior annulus of scale 4 (sup norm 11..12)
  FieldBuilder fb(Box(2, 14), 1.0);
  const Vertex y = v2(11, 5), z = v2(11, 6);
  for (const Vertex& x : {y, z})
    for (int dir = 0; dir < 4; ++dir) fb.set(x, step_to(x, dir), 0.2);
  fb.set(y, z, 1.0);
  auto f = fb.build("trap");
  auto dec = decompose(f, 0.5);
  auto gt = make_greens_triple(f, dec);
  auto r = fk_quadform(f, gt, 8.0, 4, 3.0);
  CHECK(r.support == 4);
  double direct = 0;
  std::vector<std::size_t> supp;
  for (const Vertex& x : {v2(12, 5), v2(11, 4), v2(12, 6), v2(11, 7)}) supp.push_back(std::size_t(gt.induced->state(x)));
  for (std::size_t q : supp) {
    auto col = gt.hat->column(q);
    for (std::size_t p : supp) direct += col[p];
  }
  CHECK(r.value == doctest::Approx(direct));
}

TEST_CASE("Nash functionals: derivative from the generator and the differential inequality") {
  auto in = random_instance(2, 6, 5);
  auto c = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
  std::size_t center = std::size_t(std::max(0, c.state(origin())));
  auto b = nash_bundle(c, in.dec, center, center, 4);
  double mass = 0;
  for (double v : b.nu) mass += v;
  CHECK(mass == doctest::Approx(1.0));
  for (std::size_t s = 0; s < c.size(); ++s) {
    CHECK(b.phi[s] >= 0);
    CHECK(b.phi[s] <= 1);
    if (!b.in_ball[s]) CHECK(b.phi[s] == 0);
  }
  // exact derivative against a central difference of H
  for (double t : {0.5, 3.0, 12.0}) {
    double h = 1e-4;
    auto q = ct_heat_kernel(c, center, t).values;
    double fd = (nash_h(b, ct_heat_kernel(c, center, t + h).values) - nash_h(b, ct_heat_kernel(c, center, t - h).values)) /
                (2 * h);
    CHECK(nash_h_derivative(b, q) == doctest::Approx(fd).epsilon(1e-6));
    auto r = nash_derivative_check(b, in.dec, t);
    CHECK(r.holds());
    CHECK(4 * r.rhs2 <= r.dirichlet_bound + 1e-12);
    CHECK(r.boundary <= r.dirichlet_bound + 1e-12);
  }
  CHECK_THROWS_AS(nash_derivative_check(b, in.dec, 0.0), PreconditionError);

  // constant field, t = R^2
  auto f1 = ConductanceField::dense(Box(2, 6), ConductanceLaw::constant(1.0), 1);
  auto d1 = decompose(f1, 0.5);
  auto c1 = build_chain(f1, ChainKind::induced, &d1);
  auto b1 = nash_bundle(c1, d1, std::size_t(c1.state(origin())), std::size_t(c1.state(origin())), 3);
  CHECK(nash_derivative_check(b1, d1, 9.0).holds());
}

TEST_CASE("Nash functionals on a single-state chain vanish") {
  auto one = chain_from_dense({{1.0}}, {1.0});
  one.kind = ChainKind::induced;
  NashBundle s;
  s.chain = &one;
  s.R = 1;
  s.in_ball = {1};
  s.phi = {1.0};
  s.nu = {1.0};
  s.V = 1;
  auto r = nash_derivative_check(s, std::vector<double>{1.0}, 1.0, nullptr);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs1 == 0.0);
  CHECK(r.rhs2 == 0.0);
  CHECK(r.rhs3 == 0.0);
}

TEST_CASE("Nash monotonicity with measured constants") {
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    auto in = random_instance(2, 6, seed);
    auto c = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
    std::size_t center = std::size_t(std::max(0, c.state(origin())));
    auto b = nash_bundle(c, in.dec, center, center, 4);
    std::vector<double> ts;
    for (int i = 1; i <= 40; ++i) ts.push_back(0.25 * i);
    auto m = nash_monotonicity(b, ts);
    CHECK(m.c8 > 0);
    CHECK(m.worst_drop <= 1e-9);
  }
}

TEST_CASE("weighted Poincare ratio") {
  auto f = ConductanceField::dense(Box(2, 6), ConductanceLaw::constant(1.0), 1);
  auto dec = decompose(f, 0.5);
  auto c = build_chain(f, ChainKind::induced, &dec);
  std::size_t o = std::size_t(c.state(origin()));
  auto b = nash_bundle(c, dec, o, o, 4);
  std::vector<double> x1(c.size(), 0.0);
  for (std::size_t s = 0; s < c.size(); ++s) x1[s] = b.in_ball[s] ? c.vertex(s)[0] : 0.0;
  // recompute both sides from the dense kernel
  Eigen::MatrixXd k = dense_matrix(c);
  double num = 0, mean = 0, var = 0;
  for (long i = 0; i < k.rows(); ++i)
    for (long j = 0; j < k.cols(); ++j) {
      double m = std::min(b.phi[std::size_t(i)], b.phi[std::size_t(j)]);
      double df = x1[std::size_t(i)] - x1[std::size_t(j)];
      num += c.pi[std::size_t(i)] * k(i, j) * m * df * df;
    }
  for (std::size_t s = 0; s < c.size(); ++s) mean += b.nu[s] * x1[s];
  for (std::size_t s = 0; s < c.size(); ++s) var += b.nu[s] * (x1[s] - mean) * (x1[s] - mean);
  double ratio = poincare_ratio(b, x1);
  CHECK(ratio == doctest::Approx((num / b.V) / (var / 16.0)).epsilon(1e-12));
  CHECK(ratio > 0);
  std::vector<double> affine(x1.size());
  for (std::size_t s = 0; s < x1.size(); ++s) affine[s] = -3.5 * x1[s] + 2.0;
  CHECK(poincare_ratio(b, affine) == doctest::Approx(ratio).epsilon(1e-10));
  CHECK_THROWS_AS(poincare_ratio(b, std::vector<double>(c.size(), 1.0)), PreconditionError);
}

TEST_CASE("variance inequality probes") {
  std::mt19937_64 rng(21);
  int probes = 0;
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    auto in = random_instance(2, 6, seed);
    auto c = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
    std::size_t center = std::size_t(std::max(0, c.state(origin())));
    const double R = 5;
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) grid.push_back(0.5 * i);
    double c6 = nash_c6(c, in.dec, center, grid);
    double T = R * R / ((24 * c6) * (24 * c6));
    auto b = nash_bundle(c, in.dec, center, center, R);
    double ct = nash_c_tilde(b, T);
    auto at_T = nash_variance_check(b, in.dec, T, ct);
    CHECK(at_T.holds());
    for (int j = 0; j < 5; ++j) {
      std::size_t z;
      do z = rng() % c.size();
      while (!b.in_ball[z]);
      auto bz = nash_bundle(c, in.dec, center, z, R);
      double t = T * (1 + double(rng() % 100) / 100.0);
      auto v = nash_variance_check(bz, in.dec, t, nash_c_tilde(bz, T));
      CHECK(v.holds());
      ++probes;
    }
  }
  CHECK(probes == 20);
}

TEST_CASE("Poisson window weights") {
  for (double t : {16.0, 64.0, 256.0}) {
    auto w = poisson_window_weights(std::size_t(3 * t), t);
    CHECK(w.a[0] == doctest::Approx(std::exp(-4 * t / 3) - std::exp(-5 * t / 3)).epsilon(1e-12));
    CHECK(std::abs(w.total - t / 3) <= 1e-10);
    for (double v : w.a) CHECK(v >= 0);
  }
  // direct quadrature of the defining integral for a few n
  const double t = 16;
  auto w = poisson_window_weights(60, t);
  for (int n : {0, 5, 16, 21, 27, 40}) {
    const int steps = 20000;
    const double lo = 4 * t / 3, hi = 5 * t / 3, h = (hi - lo) / steps;
    double s = 0;
    for (int i = 0; i <= steps; ++i) {
      double x = lo + i * h;
      double v = std::exp(-x + n * std::log(x) - std::lgamma(n + 1.0));
      s += (i == 0 || i == steps) ? v : (i % 2 ? 4 * v : 2 * v);
    }
    CHECK(w.a[std::size_t(n)] == doctest::Approx(s * h / 3).epsilon(1e-9));
  }
  auto w64 = poisson_window_weights(200, 64);
  CHECK(w64.tail <= std::exp(-0.01 * 64));
  CHECK(w64.decay_rate() > 0.01);
}

TEST_CASE("semigroup identity and chaining lower bound") {
  // 5-path with unequal conductances
  auto f = ConductanceField::from_values(Box(1, 2), {1.0, 0.6, 0.8, 0.9, 0.0});
  auto dec = decompose(f, 0.5);
  auto c = build_chain(f, ChainKind::induced, &dec);
  REQUIRE(c.size() == 5);
  for (std::size_t x = 0; x < 5; ++x)
    for (std::size_t y = 0; y < 5; ++y) {
      auto one = chaining_probe(c, x, y, 1.5, 1);
      CHECK(one.lhs == doctest::Approx(one.rhs).epsilon(1e-14));
      auto two = chaining_probe(c, x, y, 1.5, 2);
      CHECK(two.holds());
      // smallest pi on the path is 0.9 at the right end
      auto q = spectral_q(c, 1.5);
      double lo = 0;
      for (std::size_t z = 0; z < 5; ++z) lo += q(long(x), long(z)) * q(long(z), long(y));
      CHECK(two.rhs == doctest::Approx(lo * 0.9).epsilon(1e-9));
    }
  auto in = random_instance(2, 4, 8);
  auto ind = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 6);
  std::vector<ChainingRequest> reqs;
  for (int i = 0; i < 50; ++i)
    reqs.push_back({rng() % ind.size(), rng() % ind.size(), u(rng), u(rng), int(1 + rng() % 3)});
  auto rep = chaining_check(ind, reqs);
  CHECK(rep.worst_semigroup <= 1e-10);
  CHECK(rep.all_hold);
}

TEST_CASE("diagonal decay profile") {
  auto f = ConductanceField::dense(Box(2, 40), ConductanceLaw::constant(1.0), 1);
  auto c = build_chain(f, ChainKind::full);
  std::size_t o = std::size_t(c.state(origin()));
  auto prof = diagonal_decay_profile(c, o, 64);
  CHECK(prof[0] == doctest::Approx(0.25));
  for (int m = 1; m <= 32; ++m) {
    double r = oracle::binom_ratio(2 * m, m);
    CHECK(prof[std::size_t(2 * m - 1)] == doctest::Approx(2 * m * r * r).epsilon(1e-12));
  }
  CHECK(prof[63] == doctest::Approx(2 / M_PI).epsilon(0.01));

  auto in = random_instance(2, 6, 4);
  auto ind = build_chain(in.f, ChainKind::induced, &in.dec, HolePolicy::finite_box);
  auto rp = diagonal_decay_profile(ind, 0, 10);
  double top = 0;
  for (std::size_t p = ind.row_ptr[0]; p < ind.row_ptr[1]; ++p) top = std::max(top, ind.val[p]);
  CHECK(rp[0] == doctest::Approx(top));
}

TEST_CASE("window moments against path enumeration") {
  auto c = chain_from_dense({{0.1, 0.6, 0.3}, {0.3, 0.2, 0.5}, {0.3, 0.3, 0.4}}, {1, 1, 1});
  std::vector<double> g{1.0, 0.0, 2.5};
  auto m = window_moments(c, 0, g, 2, 4);
  Eigen::MatrixXd k = dense_matrix(c);
  double e1 = 0, e2 = 0;
  for (int b1 = 0; b1 < 3; ++b1)
    for (int b2 = 0; b2 < 3; ++b2)
      for (int b3 = 0; b3 < 3; ++b3)
        for (int b4 = 0; b4 < 3; ++b4) {
          double p = k(0, b1) * k(b1, b2) * k(b2, b3) * k(b3, b4);
          double s = g[std::size_t(b2)] + g[std::size_t(b3)] + g[std::size_t(b4)];
          e1 += p * s;
          e2 += p * s * s;
        }
  CHECK(m.mean == doctest::Approx(e1).epsilon(1e-12));
  CHECK(m.second == doctest::Approx(e2).epsilon(1e-12));
}
