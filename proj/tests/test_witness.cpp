#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cyclefill/chains.hpp"
#include "cyclefill/models.hpp"
#include "cyclefill/rng.hpp"
#include "cyclefill/slicing.hpp"
#include "cyclefill/transport.hpp"
#include "cyclefill/witness.hpp"

using namespace cyclefill;

namespace {

ZeroCycle point_cloud(std::vector<std::pair<Vec, int>> pts) {
  ZeroCycle z;
  z.ambient = {AmbientKind::Cube, int(pts[0].first.size())};
  for (auto& [pos, sign] : pts) {
    SignedPoint p;
    p.position = std::move(pos);
    p.sign = sign;
    z.points.push_back(std::move(p));
  }
  return z;
}

ZeroCycle random_cycle(RngStream& rng, int count, int d) {
  ZeroCycle z;
  z.ambient = {AmbientKind::Cube, d};
  for (int i = 0; i < count; ++i) {
    SignedPoint p;
    p.position = rng.point(d);
    p.sign = rng.sign();
    z.points.push_back(std::move(p));
  }
  return z;
}

double dist(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("pyramids peak at the center and vanish off their support") {
  PyramidAtom atom{{0.25, 0.25}, 0.5, 2.0};
  CHECK(pyramid_eval(atom, {0.5, 0.5}) == 2.0);
  CHECK(pyramid_eval(atom, {0.25, 0.25}) == 0.0);
  CHECK(pyramid_eval(atom, {0.75, 0.5}) == 0.0);
  CHECK(pyramid_eval(atom, {0.9, 0.5}) == 0.0);
  CHECK(pyramid_eval(atom, {0.375, 0.5}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pyramid_eval(atom, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(pyramid_eval({{0.0}, 0.0, 1.0}, {0.5}), std::invalid_argument);
}

TEST_CASE("grid witness: lone cell-center point") {
  auto z = point_cloud({{{0.25, 0.25, 0.25}, 1}});
  auto w = build_grid_witness(z, 0.5);
  REQUIRE(w.atoms.size() == 1);
  CHECK(w.atoms[0].side == 0.5);
  CHECK(w.atoms[0].coefficient == 0.5);
  CHECK(integrate_witness(w, z) == doctest::Approx(0.5));
  CHECK(lip_bound(w) == doctest::Approx(2.0));
  double bound = witness_lower_bound(w, z);
  CHECK(bound == doctest::Approx(0.25));
  auto [fv, plan] = fv_cube(z);
  CHECK(fv == doctest::Approx(0.25));
  CHECK(bound <= fv + 1e-9);
}

TEST_CASE("grid witness: balanced cells are dropped") {
  auto z = point_cloud({{{0.3, 0.3}, 1}, {{0.4, 0.35}, -1}});
  CHECK(build_grid_witness(z, 0.5).atoms.empty());
  z.points.push_back({{0.8, 0.8}, 1});
  auto w = build_grid_witness(z, 0.5);
  REQUIRE(w.atoms.size() == 1);
  CHECK(w.atoms[0].corner == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(build_grid_witness(z, 0.3), std::invalid_argument);
}

TEST_CASE("grid witness: default grid tracks the cycle size") {
  RngStream rng(31, 0);
  auto z = random_cycle(rng, 200, 3);
  auto w = build_grid_witness(z);
  REQUIRE(!w.atoms.empty());
  for (const auto& a : w.atoms) CHECK(a.side == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("grid witness: bound never exceeds the exact filling volume") {
  RngStream rng(31, 1);
  for (int trial = 0; trial < 100; ++trial) {
    auto z = random_cycle(rng, 200, 3);
    auto w = build_grid_witness(z);
    CHECK(witness_lower_bound(w, z) <= fv_auto(z) + 1e-9);
  }
  for (int trial = 0; trial < 100; ++trial) {
    auto z = random_cycle(rng, 150, 2);
    CHECK(witness_lower_bound(build_grid_witness(z, 0.25), z) <= fv_auto(z) + 1e-9);
  }
  for (int trial = 0; trial < 100; ++trial) {
    auto z = random_cycle(rng, 100, 1);
    CHECK(witness_lower_bound(build_grid_witness(z, 0.125), z) <= fv_auto(z) + 1e-9);
  }
}

TEST_CASE("grid witness: majority signs can still integrate negative") {
  // the per-cell imbalance sub-sum is nonnegative by construction, but the
  // pyramid-weighted integral is not: a lone majority point near the cell
  // wall loses to a minority point at the center
  auto z = point_cloud(
      {{{0.25, 0.25, 0.25}, 1}, {{0.02, 0.02, 0.02}, -1}, {{0.03, 0.02, 0.02}, -1}});
  auto w = build_grid_witness(z, 0.5);
  REQUIRE(w.atoms.size() == 1);
  CHECK(w.atoms[0].coefficient == -0.5);

  long long net = 0;
  for (const auto& p : z.points) net += p.sign;
  double subsum = 0.5 * std::abs(double(net));
  CHECK(subsum >= 0.0);

  CHECK(integrate_witness(w, z) < 0.0);
  CHECK(witness_lower_bound(w, z) == 0.0);
  CHECK(witness_lower_bound(w, z) <= fv_cube(z).first + 1e-9);

  RngStream rng(31, 2);
  for (int trial = 0; trial < 50; ++trial) {
    auto zz = random_cycle(rng, 60, 2);
    auto ww = build_grid_witness(zz, 0.25);
    std::vector<long long> cell_net(16, 0);
    for (const auto& p : zz.points) {
      int ix = std::min(3, int(p.position[0] * 4)), iy = std::min(3, int(p.position[1] * 4));
      cell_net[ix * 4 + iy] += p.sign;
    }
    double sub = 0;
    for (long long c : cell_net) sub += 0.25 * std::abs(double(c));
    CHECK(sub >= 0.0);
    CHECK(witness_lower_bound(ww, zz) >= 0.0);
  }
}

TEST_CASE("multiscale witness: two opposite quadrant points") {
  auto z = point_cloud({{{0.25, 0.25}, 1}, {{0.75, 0.75}, -1}});
  auto w = build_multiscale_witness(z, 1, 100.0);
  REQUIRE(w.atoms.size() == 2);
  for (const auto& a : w.atoms) CHECK(std::abs(a.coefficient) == 1.0);
  CHECK(integrate_witness(w, z) == doctest::Approx(2.0));
  CHECK(lip_bound(w) == doctest::Approx(4.0));
  double bound = witness_lower_bound(w, z);
  CHECK(bound == doctest::Approx(0.5));
  auto [fv, plan] = fv_cube(z);
  CHECK(fv == doctest::Approx(0.5));
  CHECK(bound <= fv + 1e-9);
}

TEST_CASE("multiscale witness: truncation caps coefficients") {
  auto z = point_cloud({{{0.25, 0.25}, 1}, {{0.25, 0.25}, 1}, {{0.25, 0.25}, 1}});
  auto w = build_multiscale_witness(z, 1, 1.0);
  REQUIRE(w.atoms.size() == 1);
  CHECK(w.atoms[0].coefficient == doctest::Approx(std::sqrt(3.0) / 2.0));

  auto zero = build_multiscale_witness(z, 1, 0.0);
  CHECK(zero.atoms.empty());
  CHECK(witness_lower_bound(zero, z) == 0.0);
}

TEST_CASE("multiscale witness: scale count and tags") {
  RngStream rng(31, 3);
  auto z = random_cycle(rng, 1000, 2);
  auto w = build_multiscale_witness(z);
  REQUIRE(!w.atoms.empty());
  for (int tag : w.scale_tags) CHECK(tag == 1);
  auto deep = build_multiscale_witness(z, 3, 1.0);
  int top = *std::max_element(deep.scale_tags.begin(), deep.scale_tags.end());
  CHECK(top == 3);
  for (size_t i = 0; i < deep.atoms.size(); ++i)
    CHECK(deep.atoms[i].side == doctest::Approx(std::ldexp(1.0, -deep.scale_tags[i])));
}

TEST_CASE("multiscale witness: bound never exceeds the exact filling volume") {
  RngStream rng(31, 4);
  for (int trial = 0; trial < 100; ++trial) {
    auto z = random_cycle(rng, 300, 2);
    auto w = build_multiscale_witness(z, 3, 1.0);
    CHECK(witness_lower_bound(w, z) <= fv_cube(z).first + 1e-9);
  }
  for (int trial = 0; trial < 10; ++trial) {
    auto z = random_cycle(rng, 1000, 2);
    auto w = build_multiscale_witness(z);
    CHECK(witness_lower_bound(w, z) <= fv_cube(z).first + 1e-9);
  }
}

TEST_CASE("multiscale witness: raw energy grows with size and scale count") {
  RngStream rng(31, 5);
  auto energy = [&](int count, int scales) {
    double total = 0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
      auto z = random_cycle(rng, count, 2);
      auto w = build_multiscale_witness(z, scales, 1e18);
      for (const auto& a : w.atoms) total += a.coefficient * a.coefficient;
    }
    return total / trials;
  };
  double s_1000_2 = energy(1000, 2);
  double s_1000_4 = energy(1000, 4);
  double s_500_3 = energy(500, 3);
  double s_2000_3 = energy(2000, 3);
  CHECK(s_1000_4 / s_1000_2 > 1.7);
  CHECK(s_1000_4 / s_1000_2 < 2.3);
  CHECK(s_2000_3 / s_500_3 > 3.4);
  CHECK(s_2000_3 / s_500_3 < 4.6);
  // per point per scale a pyramid squares to 1/6 on average
  CHECK(s_1000_2 / 2000.0 > 0.13);
  CHECK(s_1000_2 / 2000.0 < 0.21);
}

TEST_CASE("interval witness: lone point and balanced windows") {
  auto z = point_cloud({{{0.125}, 1}});
  auto w = build_interval_witness(z, 4, 100.0);
  REQUIRE(w.atoms.size() == 1);
  CHECK(w.atoms[0].corner[0] == 0.0);
  CHECK(w.atoms[0].coefficient == 1.0);
  CHECK(integrate_witness(w, z) == doctest::Approx(1.0));
  CHECK(lip_bound(w) == doctest::Approx(8.0));
  double bound = witness_lower_bound(w, z);
  CHECK(bound == doctest::Approx(0.125));
  CHECK(fv_interval(z) == doctest::Approx(0.125));
  CHECK(bound <= fv_interval(z) + 1e-9);

  auto balanced = point_cloud({{{0.1}, 1}, {{0.2}, -1}, {{0.6}, 1}, {{0.7}, -1}});
  CHECK(build_interval_witness(balanced, 2, 1.0).atoms.empty());
  CHECK_THROWS_AS(build_interval_witness(balanced, 0, 1.0), std::invalid_argument);
}

TEST_CASE("interval witness: bound never exceeds the closed form") {
  RngStream rng(31, 6);
  for (int trial = 0; trial < 200; ++trial) {
    auto z = random_cycle(rng, 500, 1);
    CHECK(witness_lower_bound(build_interval_witness(z, 16, 1.0), z) <=
          fv_interval(z) + 1e-9);
  }
  for (int trial = 0; trial < 50; ++trial) {
    auto z = random_cycle(rng, 100, 1);
    CHECK(witness_lower_bound(build_interval_witness(z, 3, 1.0), z) <= fv_interval(z) + 1e-9);
    CHECK(witness_lower_bound(build_interval_witness(z, 1, 1.0), z) <= fv_interval(z) + 1e-9);
  }
}

TEST_CASE("certified Lipschitz bound dominates sampled increments") {
  RngStream rng(31, 7);
  auto check_pairs = [&](const WitnessFunction& w, int d) {
    double lip = lip_bound(w);
    for (int i = 0; i < 10000; ++i) {
      Vec x = rng.point(d), y = rng.point(d);
      CHECK(std::abs(witness_eval(w, x) - witness_eval(w, y)) <= lip * dist(x, y) + 1e-9);
    }
  };
  check_pairs(build_grid_witness(random_cycle(rng, 100, 3)), 3);
  check_pairs(build_multiscale_witness(random_cycle(rng, 200, 2), 3, 1.0), 2);
  check_pairs(build_interval_witness(random_cycle(rng, 100, 1), 8, 1.0), 1);
}

TEST_CASE("witnesses vanish on the cube boundary") {
  RngStream rng(31, 8);
  auto check_faces = [&](const WitnessFunction& w, int d) {
    for (int rep = 0; rep < 200; ++rep) {
      Vec x = rng.point(d);
      int axis = int(rng.uniform_int(0, d - 1));
      x[axis] = rng.uniform01() < 0.5 ? 0.0 : 1.0;
      CHECK(std::abs(witness_eval(w, x)) <= 1e-12);
    }
  };
  check_faces(build_grid_witness(random_cycle(rng, 100, 3)), 3);
  check_faces(build_multiscale_witness(random_cycle(rng, 200, 2), 3, 1.0), 2);
  check_faces(build_interval_witness(random_cycle(rng, 100, 1), 5, 1.0), 1);
}

TEST_CASE("scaling every coefficient leaves the bound unchanged") {
  RngStream rng(31, 9);
  auto z = random_cycle(rng, 200, 2);
  auto w = build_multiscale_witness(z, 3, 1.0);
  double before = witness_lower_bound(w, z);
  for (auto& a : w.atoms) a.coefficient *= 3.7;
  CHECK(witness_lower_bound(w, z) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("knot bound equals the plain witness bound for disjoint cells") {
  Pseudomanifold m;
  m.num_vertices = 6;
  m.k = 1;
  m.simplices.push_back({{0, 1}, 1});
  m.simplices.push_back({{2, 3}, 1});
  m.simplices.push_back({{4, 5}, 1});
  std::vector<SliceAtom> atoms(3);
  auto put = [&](int i, Vec pos, int sign) {
    atoms[i].source_index = i;
    SignedPoint p;
    p.position = std::move(pos);
    p.sign = sign;
    atoms[i].point = std::move(p);
  };
  put(0, {0.3, 0.4}, 1);
  put(1, {0.7, 0.2}, -1);
  put(2, {0.55, 0.8}, 1);

  ZeroCycle full;
  full.ambient = {AmbientKind::Cube, 2};
  for (const auto& a : atoms) full.points.push_back(*a.point);
  double direct = witness_lower_bound(build_multiscale_witness(full, 0, 1.0), full);
  CHECK(knot_slice_lower_bound(atoms, m, 2) == doctest::Approx(direct).epsilon(1e-14));

  std::vector<SliceAtom> wrong(2);
  CHECK_THROWS_AS(knot_slice_lower_bound(wrong, m, 2), std::invalid_argument);
}

TEST_CASE("knot bound: five-cycle coloring keeps a third of the cells") {
  auto m = make_cycle_graph(5);
  auto classes = greedy_coloring(dependency_graph(m));
  CHECK(classes[0].size() >= 2);

  RngStream rng(31, 10);
  auto z = embed_pseudomanifold(m, 3, rng);
  for (int trial = 0; trial < 20; ++trial) {
    SliceSpec spec;
    spec.fixed_axes = {0};
    spec.values = {rng.uniform01()};
    auto [cycle, atoms] = slice_polycycle_generic(z, spec, rng);
    double bound = knot_slice_lower_bound(atoms, m, 2);
    CHECK(bound >= 0.0);
    CHECK(bound <= fv_cube(cycle).first + 1e-9);
  }

  std::vector<SliceAtom> silent(5);
  for (int i = 0; i < 5; ++i) silent[i].source_index = i;
  CHECK(knot_slice_lower_bound(silent, m, 2) == 0.0);
}

TEST_CASE("knot bound stays below the exact filling volume of the slice") {
  RngStream rng(31, 11);
  auto m = make_cycle_graph(2000);
  auto z = embed_pseudomanifold(m, 3, rng);
  for (int trial = 0; trial < 15; ++trial) {
    SliceSpec spec;
    spec.fixed_axes = {int(rng.uniform_int(0, 2))};
    spec.values = {rng.uniform01()};
    auto [cycle, atoms] = slice_polycycle_generic(z, spec, rng);
    if (cycle.points.empty()) continue;
    double bound = knot_slice_lower_bound(atoms, m, 2);
    CHECK(bound <= fv_cube(cycle).first + 1e-9);
  }
}

TEST_CASE("knot bound dispatches on the slice dimension") {
  RngStream rng(31, 12);
  auto m1 = make_cycle_graph(500);
  auto z1 = embed_pseudomanifold(m1, 2, rng);
  for (int trial = 0; trial < 20; ++trial) {
    SliceSpec spec;
    spec.fixed_axes = {0};
    spec.values = {rng.uniform01()};
    auto [cycle, atoms] = slice_polycycle_generic(z1, spec, rng);
    KnotWitnessParams params;
    params.interval_R = 16;
    double bound = knot_slice_lower_bound(atoms, m1, 1, params);
    CHECK(bound <= fv_interval(cycle) + 1e-9);
  }

  auto m3 = make_cycle_graph(500);
  auto z3 = embed_pseudomanifold(m3, 4, rng);
  for (int trial = 0; trial < 10; ++trial) {
    SliceSpec spec;
    spec.fixed_axes = {int(rng.uniform_int(0, 3))};
    spec.values = {rng.uniform01()};
    auto [cycle, atoms] = slice_polycycle_generic(z3, spec, rng);
    if (cycle.points.empty()) continue;
    double bound = knot_slice_lower_bound(atoms, m3, 3);
    CHECK(bound <= fv_cube(cycle).first + 1e-9);
  }
}
