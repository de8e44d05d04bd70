#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sfcpart/metrics.hpp"

using namespace sfcpart;

namespace {

const SpaceParams P22{2, 2};

Box box2(int l, long x, long y) {
  return Box(P22, l, {Int(x), Int(y)});
}

Partition random_partition(const CurveSpec& curve, int subdivisions,
                           int max_depth, uint64_t seed) {
  Grid g = random_grid(curve.params, subdivisions, max_depth, seed);
  Dsfc order = order_cells(curve, g);
  std::mt19937_64 rng(seed ^ 0xabcdef12345ull);
  size_t a = rng() % order.size(), b = rng() % order.size();
  if (a > b) std::swap(a, b);
  return partition_from_range(order, a, b);
}

}  // namespace

TEST_CASE("single cell measures") {
  for (int d = 1; d <= 3; ++d) {
    SpaceParams p{2, d};
    std::vector<Int> coords(d, Int(1));
    Box g(p, 1, coords);
    MeasureReport r = measure({g});
    CHECK(r.dv == 1);
    CHECK(r.ds == 2 * d);
    CHECK(r.dr == Rat(2 * d));
  }
  // depth-M cell, d=2, k=2: cv = 4^-M, cs = 4 * 2^-M
  for (int m = 1; m <= 4; ++m) {
    Box g(P22, m, {Int(0), Int(0)});
    MeasureReport r = measure({g});
    CHECK(r.cv == kpow(2, -2 * m));
    CHECK(r.cs == 4 * kpow(2, -m));
    CHECK(r.diameter == kpow(2, -m));
  }
}

TEST_CASE("example P measures: dv 3, ds 11") {
  std::vector<Box> p = {box2(1, 0, 0), box2(2, 0, 2), box2(3, 2, 5)};
  MeasureReport r = measure(p);
  CHECK(r.dv == 3);
  CHECK(r.ds == 11);
  CHECK(r.dr == Rat(11, 3));
  CHECK(r.cv == Rat(1, 4) + Rat(1, 16) + Rat(1, 64));
}

TEST_CASE("grid coverage is exactly one and additive") {
  std::mt19937_64 rng(4);
  for (uint64_t seed = 0; seed < 25; ++seed) {
    Grid g = random_grid(P22, 12, 6, seed);
    CHECK(coverage(P22, g.cells) == 1);
    size_t cut = 1 + rng() % (g.cells.size() - 1);
    std::vector<Box> a(g.cells.begin(), g.cells.begin() + cut);
    std::vector<Box> b(g.cells.begin() + cut, g.cells.end());
    CHECK(coverage(P22, a) + coverage(P22, b) == 1);
  }
}

TEST_CASE("cv_boundary examples and refinement invariance") {
  CHECK(cv_boundary({unit_box(P22)}, 0) == 1);
  CHECK(cv_boundary({unit_box(P22)}, 1) == 4);   // binom(2,1) 2^1
  CHECK(cv_boundary({unit_box(P22)}, 2) == 4);   // vertex count
  CHECK(cv_boundary({box2(1, 0, 0)}, 1) == 2);   // four edges of length 1/2
  SpaceParams p23{2, 3};
  CHECK(cv_boundary({unit_box(p23)}, 1) == 6);
  CHECK(cv_boundary({unit_box(p23)}, 2) == 12);
  // invariance under refinement
  std::vector<Box> x = {box2(1, 0, 0), box2(1, 1, 0)};
  Rat before = cv_boundary(x, 1);
  std::vector<Box> refined = {box2(1, 1, 0)};
  for (Box& c : children(box2(1, 0, 0))) refined.push_back(std::move(c));
  CHECK(cv_boundary(refined, 1) == before);
}

TEST_CASE("diameter") {
  CHECK(diameter({unit_box(P22)}) == 1);
  // two opposite corner depth-2 cells
  CHECK(diameter({box2(2, 0, 0), box2(2, 3, 3)}) == 1);
  CHECK(diameter({box2(2, 0, 0), box2(2, 1, 1)}) == Rat(1, 2));
  CHECK(diameter({box2(3, 2, 5)}) == Rat(1, 8));
}

TEST_CASE("continuous bounds: whole domain and random sweep") {
  for (int c = 0; c <= 1; ++c) {
    BoundsCheck b = continuous_bounds_check({unit_box(P22)}, c);
    CHECK(b.ok);
  }
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (uint64_t seed = 0; seed < 150; ++seed) {
    Partition p = random_partition(curve, 12, 5, seed);
    for (int c = 0; c <= 1; ++c) {
      BoundsCheck b = continuous_bounds_check(p.cells, c);
      CHECK(b.ok);
    }
    CHECK(quasi_optimality_check(p.cells));
  }
}

TEST_CASE("subdivision law on classified partitions") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Partition p = random_partition(curve, 8, 4, seed);
    ClassifiedView v = classify(P22, p.cells);
    Int ds0 = ds_intrinsic(v.classified);
    for (size_t i = 0; i < v.classified.size(); ++i) {
      std::vector<Box> refined = v.classified;
      Box target = refined[i];
      refined.erase(refined.begin() + static_cast<long>(i));
      for (Box& ch : children(target)) refined.push_back(std::move(ch));
      CHECK(refined.size() == v.classified.size() + 3);
      CHECK(ds_intrinsic(refined) == ds0 + v.classes[i] * (2 - 1));
    }
  }
}

TEST_CASE("measure report JSON uses p/q strings") {
  MeasureReport r = measure({box2(1, 0, 0)});
  std::string j = measure_to_json(r);
  CHECK(j.find("\"dv\":1") != std::string::npos);
  CHECK(j.find("\"ds\":4") != std::string::npos);
  CHECK(j.find("\"cv\":\"1/4\"") != std::string::npos);
  CHECK(j.find("\"dr\":\"4/1\"") != std::string::npos);
}

TEST_CASE("rational helpers") {
  CHECK(to_frac_string(Rat(4, 6)) == "2/3");
  CHECK(parse_frac("2/3") == Rat(2, 3));
  CHECK(parse_frac("7") == Rat(7));
  CHECK(kpow(3, -2) == Rat(1, 9));
  CHECK(rpow(Rat(2, 3), 3) == Rat(8, 27));
  CHECK(rpow(Rat(2), -2) == Rat(1, 4));
}
