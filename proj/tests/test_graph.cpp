#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rcm/env/annulus.hpp"
#include "rcm/error.hpp"
#include "rcm/graph/cluster.hpp"
#include "rcm/graph/density.hpp"
#include "rcm/graph/distance.hpp"
#include "rcm/graph/holes.hpp"
#include "rcm/graph/slab.hpp"

using namespace rcm;

namespace {

Vertex v2(int a, int b) {
  Vertex v;
  v[0] = a;
  v[1] = b;
  return v;
}

ConductanceLaw mixed_law() { return ConductanceLaw("m", {{1.0, 0.6}, {0.5, 0.15}, {0.05, 0.25}}); }

// Flood fill over strong edges found by scanning neighbors; returns component sets.
std::vector<std::set<Vertex>> flood_components(const ConductanceField& f, double alpha) {
  const Box& box = f.box();
  std::set<Vertex> seen;
  std::vector<std::set<Vertex>> comps;
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex s = box.vertex(i);
    if (seen.count(s)) continue;
    std::set<Vertex> comp{s};
    std::deque<Vertex> q{s};
    seen.insert(s);
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      for (const Vertex& u : oracle::scan_neighbors(box, v)) {
        if (seen.count(u) || oracle::weight(f, v, u) < alpha) continue;
        seen.insert(u);
        comp.insert(u);
        q.push_back(u);
      }
    }
    comps.push_back(comp);
  }
  return comps;
}

std::map<Vertex, int> bfs_on(const std::set<Vertex>& allowed, const ConductanceField& f, double alpha,
                             const Vertex& s) {
  std::map<Vertex, int> dist{{s, 0}};
  std::deque<Vertex> q{s};
  while (!q.empty()) {
    Vertex v = q.front();
    q.pop_front();
    for (const Vertex& u : oracle::scan_neighbors(f.box(), v)) {
      if (!allowed.count(u) || dist.count(u) || oracle::weight(f, v, u) < alpha) continue;
      dist[u] = dist[v] + 1;
      q.push_back(u);
    }
  }
  return dist;
}

}  // namespace

TEST_CASE("decompose: homogeneous, isolated vertex, bad alpha") {
  Box box(2, 4);
  auto hom = ConductanceField::dense(box, ConductanceLaw::constant(), 1);
  auto dec = decompose(hom, 0.5);
  CHECK(dec.giant_size == box.size());
  CHECK_THROWS_AS(decompose(hom, 1.0 + 1e-9), PreconditionError);
  CHECK_THROWS_AS(decompose(hom, 0.0), PreconditionError);

  FieldBuilder b(box, 1.0);
  b.set_incident(v2(1, 1), 0.25);
  auto dec2 = decompose(b.build(), 0.5);
  CHECK(dec2.giant_size == box.size() - 1);
  CHECK_FALSE(dec2.on_giant(v2(1, 1)));
  CHECK(dec2.label_size[std::size_t(dec2.labels[box.index(v2(1, 1))])] == 1);
}

TEST_CASE("decompose matches flood fill on random fields") {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 40; ++t) {
    int d = 1 + t % 3;
    auto f = ConductanceField::dense(Box(d, d == 3 ? 3 : 6), mixed_law(), gen());
    double alpha = t % 2 ? 0.5 : 0.9;
    auto dec = decompose(f, alpha);
    auto comps = flood_components(f, alpha);
    std::size_t biggest = 0;
    for (auto& c : comps) {
      biggest = std::max(biggest, c.size());
      int32_t lab = dec.labels[f.box().index(*c.begin())];
      for (const Vertex& v : c) CHECK(dec.labels[f.box().index(v)] == lab);
      CHECK(dec.label_size[std::size_t(lab)] == c.size());
    }
    CHECK(dec.giant_size == biggest);
    CHECK(comps.size() == std::set<int32_t>(dec.labels.begin(), dec.labels.end()).size());
  }
}

TEST_CASE("chemical distance") {
  Box box(2, 5);
  auto hom = ConductanceField::dense(box, ConductanceLaw::constant(), 1);
  auto dec = decompose(hom, 0.5);
  auto dm = chemical_distance(dec, origin());
  CHECK(dm.at(box.index(v2(1, 1))) == 2);
  for (std::size_t i = 0; i < box.size(); ++i) {
    CHECK(*dm.at(i) >= l1_norm(box.vertex(i), 2));
    CHECK(*dm.at(i) <= 2 * linf_norm(box.vertex(i), 2));
  }

  // Corridor along the x axis; cutting one edge forces a detour through the side lane.
  Box cbox(2, 5);
  FieldBuilder b(cbox, 0.1);
  for (int x = -5; x < 5; ++x) b.set(v2(x, 0), v2(x + 1, 0), 1.0);
  for (int x = -5; x < 5; ++x) b.set(v2(x, 1), v2(x + 1, 1), 1.0);
  b.set(v2(-5, 0), v2(-5, 1), 1.0);
  auto dec_c = decompose(b.build(), 0.5);
  CHECK(chemical_distance(dec_c, v2(0, 0)).at(cbox.index(v2(3, 0))) == 3);
  b.set(v2(1, 0), v2(2, 0), 0.1);
  auto dec_cut = decompose(b.build(), 0.5);
  // 0 -> (-5,0) -> (-5,1) -> (5,1) is the only way around; (3,0) is now on a separate piece.
  auto dcut = chemical_distance(dec_cut, v2(0, 0));
  CHECK(dcut.at(cbox.index(v2(1, 0))) == 1);
  b.set(v2(5, 0), v2(5, 1), 1.0);
  auto dec_loop = decompose(b.build(), 0.5);
  CHECK(chemical_distance(dec_loop, v2(0, 0)).at(cbox.index(v2(3, 0))) == 5 + 1 + 10 + 1 + 2);

  auto dm_loop = chemical_distance(dec_loop, v2(0, 0));
  CHECK_FALSE(dm_loop.at(cbox.index(v2(0, 4))).has_value());
  CHECK_THROWS_AS(chemical_distance(dec_loop, v2(0, 4)), PreconditionError);
}

TEST_CASE("hole report: isolated vertex, domino, homogeneous") {
  Box box(2, 5);
  auto hom = decompose(ConductanceField::dense(box, ConductanceLaw::constant(), 1), 0.5);
  auto rh = hole_report(hom);
  CHECK(rh.holes.empty());
  for (std::size_t i = 0; i < box.size(); ++i) CHECK(rh.diam(i) == 0);

  FieldBuilder b(box, 1.0);
  b.set_incident(origin(), 0.2);
  auto dec = decompose(b.build(), 0.5);
  auto rep = hole_report(dec);
  REQUIRE(rep.holes.size() == 1);
  CHECK(rep.diam(box.index(origin())) == 4);
  CHECK(rep.g_size(box.index(v2(1, 0))) == 1);
  CHECK(rep.g_size(box.index(v2(3, 3))) == 0);

  // 2x1 domino of weak vertices; brute force the diameter with BFS on the giant set.
  FieldBuilder b2(box, 1.0);
  b2.set_incident(origin(), 0.2).set_incident(v2(1, 0), 0.2);
  auto f2 = b2.build();
  auto dec2 = decompose(f2, 0.5);
  auto rep2 = hole_report(dec2);
  REQUIRE(rep2.holes.size() == 1);
  std::set<Vertex> giant;
  for (std::size_t i : dec2.giant_vertices()) giant.insert(box.vertex(i));
  std::set<Vertex> nbrs;
  for (const Vertex& h : {origin(), v2(1, 0)})
    for (const Vertex& u : oracle::scan_neighbors(box, h))
      if (giant.count(u)) nbrs.insert(u);
  int diam = 0;
  for (const Vertex& a : nbrs) {
    auto dist = bfs_on(giant, f2, 0.5, a);
    for (const Vertex& c : nbrs) diam = std::max(diam, dist.at(c));
  }
  CHECK(rep2.diam(box.index(origin())) == diam);
  CHECK(diam == 5);
}

TEST_CASE("coarse distance") {
  Box box(2, 5);
  FieldBuilder b(box, 1.0);
  b.set_incident(origin(), 0.2);
  auto dec = decompose(b.build(), 0.5);
  auto dprime = coarse_distance(dec, v2(-1, 0));
  CHECK(dprime.at(box.index(v2(1, 0))) == 1);
  CHECK(chemical_distance(dec, v2(-1, 0)).at(box.index(v2(1, 0))) == 4);

  auto hom = decompose(ConductanceField::dense(box, ConductanceLaw::constant(), 1), 0.5);
  CHECK(coarse_distance(hom, origin()).dist == chemical_distance(hom, origin()).dist);
}

TEST_CASE("d' <= dist and both are metrics on 100 random fields") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<std::size_t> pick(0, 1u << 30);
  for (int t = 0; t < 100; ++t) {
    auto f = ConductanceField::dense(Box(2, 6), mixed_law(), gen());
    auto dec = decompose(f, 0.5);
    auto holes = hole_report(dec);
    auto g = dec.giant_vertices();
    std::vector<std::size_t> probe;
    for (int i = 0; i < 4; ++i) probe.push_back(g[pick(gen) % g.size()]);
    std::vector<DistanceMap> chem, coarse;
    for (std::size_t p : probe) {
      chem.push_back(chemical_distance(dec, dec.box.vertex(p)));
      coarse.push_back(coarse_distance(dec, holes, dec.box.vertex(p)));
    }
    for (std::size_t a = 0; a < probe.size(); ++a) {
      for (std::size_t i : g) CHECK(coarse[a].dist[i] <= chem[a].dist[i]);
      for (std::size_t b = 0; b < probe.size(); ++b) {
        CHECK(chem[a].dist[probe[b]] == chem[b].dist[probe[a]]);
        CHECK(coarse[a].dist[probe[b]] == coarse[b].dist[probe[a]]);
        for (std::size_t c = 0; c < probe.size(); ++c) {
          CHECK(chem[a].dist[probe[c]] <= chem[a].dist[probe[b]] + chem[b].dist[probe[c]]);
          CHECK(coarse[a].dist[probe[c]] <= coarse[a].dist[probe[b]] + coarse[b].dist[probe[c]]);
        }
      }
    }
  }
}

TEST_CASE("slab count: homogeneous, all weak, recount on random fields") {
  const int M = 2;
  AnnulusIndex k = annulus(4, true);
  Box box(2, 15);
  auto hom = ConductanceField::dense(box, ConductanceLaw::constant(), 1);
  SlabCount c = slab_cluster_count(hom, 0.5, M, k);
  CHECK(c.q == c.points);
  uint64_t pts = 0;
  for (const Vertex& x : annulus_members(k, 2)) pts += in_slab_lattice(x, 2, M);
  CHECK(c.points == pts);
  auto weak = ConductanceField::dense(box, ConductanceLaw::constant(0.1), 1);
  CHECK(slab_cluster_count(weak, 0.5, M, k).q == 0);
  CHECK_THROWS_AS(slab_cluster_count(hom, 0.5, 3, k), PreconditionError);
  CHECK_THROWS_AS(slab_cluster_count(ConductanceField::dense(Box(2, 8), ConductanceLaw::constant(), 1), 0.5, M, k),
                  PreconditionError);

  std::mt19937_64 gen(8);
  for (int t = 0; t < 10; ++t) {
    auto f = ConductanceField::dense(box, mixed_law(), gen());
    SlabCount got = slab_cluster_count(f, 0.5, M, k);
    uint64_t q = 0;
    std::set<int> firsts;
    for (const Vertex& x : annulus_members(k, 2))
      if (in_slab_lattice(x, 2, M)) firsts.insert(x[0]);
    for (int x0 : firsts) {
      std::set<Vertex> slab;
      for (std::size_t i = 0; i < box.size(); ++i) {
        Vertex v = box.vertex(i);
        if (v[0] >= x0 && v[0] <= x0 + M - 1) slab.insert(v);
      }
      std::set<Vertex> best, done;
      for (const Vertex& s : slab) {
        if (done.count(s)) continue;
        auto dist = bfs_on(slab, f, 0.5, s);
        std::set<Vertex> comp;
        for (auto& [v, dd] : dist) comp.insert(v), done.insert(v);
        if (comp.size() > best.size()) best = comp;
      }
      for (const Vertex& x : annulus_members(k, 2))
        if (x[0] == x0 && in_slab_lattice(x, 2, M) && best.count(x)) ++q;
    }
    CHECK(got.q == q);
  }
}

TEST_CASE("density statistics") {
  Box box(2, 12);
  auto hom = ConductanceField::dense(box, ConductanceLaw::constant(), 1);
  auto rep = density_statistics(hom, 16, {1, 3}, 2.0);
  CHECK(rep.flagged == 0);
  CHECK(rep.pair_sum == 0);
  for (auto& w : rep.windows) CHECK(w.max == 0);
  CHECK_THROWS_AS(density_statistics(hom, 16, {13}, 2.0), PreconditionError);

  // Planted indicator on the sublattice (2Z)^2: any window of odd side 2l+1 with even-aligned corner.
  std::vector<uint8_t> ind(box.size(), 0);
  std::size_t planted = 0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    Vertex v = box.vertex(i);
    if (v[0] % 2 == 0 && v[1] % 2 == 0) ind[i] = 1, ++planted;
  }
  auto wins = window_densities(box, ind, {1, 2, 5});
  for (auto& w : wins) {
    // Direct count oracle over every placement.
    double sum = 0, mx = 0, mn = 1;
    int cnt = 0;
    for (int cx = -12 + w.ell; cx <= 12 - w.ell; ++cx)
      for (int cy = -12 + w.ell; cy <= 12 - w.ell; ++cy) {
        int s = 0;
        for (int x = cx - w.ell; x <= cx + w.ell; ++x)
          for (int y = cy - w.ell; y <= cy + w.ell; ++y) s += ind[box.index(v2(x, y))];
        double dens = s / std::pow(2.0 * w.ell + 1, 2);
        sum += dens, mx = std::max(mx, dens), mn = std::min(mn, dens), ++cnt;
      }
    CHECK(w.positions == std::size_t(cnt));
    CHECK(w.mean == doctest::Approx(sum / cnt).epsilon(1e-12));
    CHECK(w.max == doctest::Approx(mx));
    CHECK(w.min == doctest::Approx(mn));
  }
  CHECK(planted == 13 * 13);

  for (int d = 1; d <= 4; ++d)
    for (int r : {2, 5}) {
      Vertex a = origin(), b;
      b[0] = r;
      CHECK(pair_sum({a, b}, d, double(r)) == doctest::Approx(2.0 / (1 + std::pow(r, d - 2))));
      CHECK(pair_sum({a, b}, d, double(r) + 0.5) == 0.0);
    }
}

TEST_CASE("Bernoulli deviation bound") {
  for (double p : {0.01, 0.05, 0.2})
    for (int m : {10, 100, 1000, 5000}) CHECK(bernoulli_deviation_probability(p, m) <= bernoulli_deviation_bound(p, m));
}
