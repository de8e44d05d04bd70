#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sfcpart/generators.hpp"
#include "sfcpart/partition.hpp"

using namespace sfcpart;

namespace {

const SpaceParams P22{2, 2};

Box box2(int l, long x, long y) {
  return Box(P22, l, {Int(x), Int(y)});
}

// The three-cell running example: a depth-1 cell, a depth-2 cell and a
// depth-3 cell around the upper-left region.
std::vector<Box> example_p() {
  return {box2(1, 0, 0), box2(2, 0, 2), box2(3, 2, 5)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Partition random_partition(const CurveSpec& curve, int subdivisions,
                           int max_depth, uint64_t seed) {
  Grid g = random_grid(curve.params, subdivisions, max_depth, seed);
  Dsfc order = order_cells(curve, g);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  size_t a = rng() % order.size(), b = rng() % order.size();
  if (a > b) std::swap(a, b);
  return partition_from_range(order, a, b);
}

}  // namespace

TEST_CASE("boundary of a single max-depth cell is its subcube set") {
  for (int d = 1; d <= 3; ++d) {
    SpaceParams p{2, d};
    std::vector<Int> coords(d, Int(1));
    Box g(p, 1, coords);
    for (int c = 0; c <= d; ++c) {
      FaceSet b = boundary_intrinsic({g}, c);
      CHECK(b.size() == binom(d, c) * (1u << c));
    }
  }
}

TEST_CASE("boundary of the whole domain at depth 1") {
  Grid g = subdivide(unit_grid(P22), unit_box(P22));
  FaceSet edges = boundary(g.cells, g, 1);
  CHECK(edges.size() == 8);
  FaceSet verts = boundary(g.cells, g, 2);
  CHECK(verts.size() == 4);  // only the domain corners are owned solely
}

TEST_CASE("example P: boundary sizes and measures") {
  std::vector<Box> p = example_p();
  CHECK(boundary_intrinsic(p, 0).size() == 3);
  CHECK(boundary_intrinsic(p, 1).size() == 11);
  CHECK(boundary_intrinsic(p, 2).size() == 6);
  Grid g = minimal_grid(P22, p);
  CHECK(g.size() == 10);
  CHECK(ds(p, g) == 11);
  CHECK(oracle::ds_raster(p, g) == 11);
  CHECK(oracle::vertex_count_raster(p, g) == 6);
}

TEST_CASE("example P: all three cells have class 2") {
  std::vector<Box> p = example_p();
  Grid g = minimal_grid(P22, p);
  std::vector<int> cls = cell_classes(p, g);
  for (int c : cls) CHECK(c == 2);
}

TEST_CASE("example P: pre-classification has 12 cells at depth 3") {
  std::vector<Box> p = example_p();
  std::vector<Box> pre = preclassify(P22, p);
  CHECK(pre.size() == 12);
  int depth = 0;
  for (const Box& b : pre) depth = std::max(depth, b.depth);
  CHECK(depth == 3);  // depth(P~) = depth(P)
  // refines P
  BoxSet pset(p);
  for (const Box& b : pre) CHECK(pset.covering_depth(b) >= 0);
}

TEST_CASE("example P: classification has 15 cells, histogram {0:1,1:8,2:6}") {
  std::vector<Box> p = example_p();
  ClassifiedView v = classify(P22, p);
  CHECK(v.preclassified.size() == 12);
  CHECK(v.classified.size() == 15);
  auto h = v.histogram();
  CHECK(h[0] == 1);
  CHECK(h[1] == 8);
  CHECK(h[2] == 6);
  // ds(P*) = 20 via the class sum and via boundary enumeration
  CHECK(v.class_sum() == 20);
  CHECK(ds_intrinsic(v.classified) == 20);
  Grid g = minimal_grid(P22, v.classified);
  CHECK(oracle::ds_raster(v.classified, g) == 20);
}

TEST_CASE("example P fixture file round-trips into the same cells") {
  Partition p = partition_from_json(read_file(std::string(FIXTURES_DIR) +
                                              "/example_p.json"));
  CHECK(p.cells == example_p());
  CHECK_FALSE(p.curve.has_value());
}

TEST_CASE("classification is idempotent") {
  std::vector<Box> p = example_p();
  ClassifiedView v = classify(P22, p);
  ClassifiedView w = classify(P22, v.classified);
  CHECK(w.classified == v.classified);
  CHECK(w.preclassified == v.classified);
}

TEST_CASE("already pre-classified partitions are unchanged") {
  // whole-domain regular depth-2 partition
  Grid g = subdivide(unit_grid(P22), unit_box(P22));
  std::vector<Box> lvl1 = g.cells;
  for (const Box& b : lvl1) g = subdivide(g, b);
  CHECK(preclassify(P22, g.cells) == g.cells);
  // a single depth-M cell inside its minimal grid
  Box v = box2(3, 5, 2);
  CHECK(preclassify(P22, {v}) == std::vector<Box>{v});
}

TEST_CASE("class of interior and corner cells") {
  Grid g = subdivide(unit_grid(P22), unit_box(P22));
  std::vector<Box> lvl1 = g.cells;
  for (const Box& b : lvl1) g = subdivide(g, b);
  std::vector<int> cls = cell_classes(g.cells, g);
  for (size_t i = 0; i < g.cells.size(); ++i) {
    const Box& b = g.cells[i];
    int expect = 0;
    for (int ax = 0; ax < 2; ++ax)
      if (b.coords[ax] == 0 || b.coords[ax] == 3) ++expect;
    CHECK(cls[i] == expect);
  }
}

TEST_CASE("shape: merging and idempotence") {
  auto kids = children(unit_box(P22));
  CHECK(shape(P22, kids) == std::vector<Box>{unit_box(P22)});
  std::vector<Box> p = example_p();
  CHECK(shape(P22, p) == p);  // no parent fully covered
  CHECK(is_shape(P22, p));
  // mixed depths: 3 children plus the 4 grandchildren of the last child
  std::vector<Box> mixed(kids.begin(), kids.end() - 1);
  for (const Box& c : children(kids.back())) mixed.push_back(c);
  CHECK(shape(P22, mixed) == std::vector<Box>{unit_box(P22)});
}

TEST_CASE("shape is idempotent on random partitions") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Partition p = random_partition(curve, 12, 5, seed);
    std::vector<Box> q = shape(P22, p.cells);
    CHECK(shape(P22, q) == q);
    CHECK(coverage(P22, q) == coverage(P22, p.cells));
  }
}

TEST_CASE("partition shapes have at most 2 k^d boxes per depth") {
  for (const char* name : {"hilbert2d", "morton"}) {
    CurveSpec curve = make_curve(name, P22);
    for (uint64_t seed = 0; seed < 100; ++seed) {
      Partition p = random_partition(curve, 14, 6, seed);
      std::vector<Box> q = shape(P22, p.cells);
      std::map<int, int> per_depth;
      for (const Box& b : q) per_depth[b.depth]++;
      for (auto& [l, n] : per_depth) CHECK(n <= 8);
    }
  }
}

TEST_CASE("minimal grid of a partition shape is spanned by its end cells") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Partition p = random_partition(curve, 12, 5, seed);
    std::vector<Box> q = shape(P22, p.cells);
    Dsfc order = order_cells(curve, minimal_grid(P22, q));
    // first and last shape boxes along the curve
    std::vector<Box> sorted_by_curve = q;
    std::sort(sorted_by_curve.begin(), sorted_by_curve.end(),
              [&](const Box& a, const Box& b) {
                return compare(curve, a, b) == Order::Before;
              });
    Grid whole = minimal_grid(P22, q);
    Grid ends = minimal_grid(
        P22, {sorted_by_curve.front(), sorted_by_curve.back()});
    CHECK(whole == ends);
  }
}

TEST_CASE("classified cells own exactly class-many facets") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (uint64_t seed = 0; seed < 25; ++seed) {
    Partition p = random_partition(curve, 10, 4, seed);
    ClassifiedView v = classify(P22, p.cells);
    Grid g = minimal_grid(P22, v.classified);
    BoundaryAttribution attr = boundary_with_owners(v.classified, g, 1);
    std::vector<long> owned(v.classified.size(), 0);
    for (uint32_t o : attr.owner) ++owned[o];
    for (size_t i = 0; i < v.classified.size(); ++i)
      CHECK(owned[i] == v.classes[i]);
    // ds equals the class sum
    CHECK(ds(v.classified, g) == v.class_sum());
  }
}

TEST_CASE("facet-count and parallel-pair criteria coincide on P~") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (uint64_t seed = 100; seed < 130; ++seed) {
    Partition p = random_partition(curve, 10, 4, seed);
    std::vector<Box> pre = preclassify(P22, p.cells);
    Grid g = minimal_grid(P22, pre);
    BoundaryAttribution attr = boundary_with_owners(pre, g, 1);
    std::vector<int> cls = cell_classes(pre, g);
    std::vector<long> owned(pre.size(), 0);
    std::vector<uint32_t> lo(pre.size(), 0), hi(pre.size(), 0);
    for (size_t i = 0; i < attr.faces.faces.size(); ++i) {
      const Subcube& s = attr.faces.faces[i];
      uint32_t o = attr.owner[i];
      ++owned[o];
      int axis = s.axis_fixed(0) ? 0 : 1;
      Int scale = ipow(2, s.depth - pre[o].depth);
      if (s.plane_position(axis) == pre[o].coords[axis] * scale)
        lo[o] |= 1u << axis;
      else
        hi[o] |= 1u << axis;
    }
    BoxSet nc(non_classified_cells(P22, pre));
    for (size_t i = 0; i < pre.size(); ++i) {
      bool extra_facets = owned[i] > cls[i];
      bool parallel_pair = (lo[i] & hi[i]) != 0;
      CHECK(extra_facets == parallel_pair);
      CHECK(nc.contains(pre[i]) == parallel_pair);
    }
  }
}

TEST_CASE("cv of the c-boundary is refinement invariant") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  std::mt19937_64 rng(9);
  for (uint64_t seed = 0; seed < 25; ++seed) {
    Partition p = random_partition(curve, 10, 4, seed);
    for (int c = 0; c <= 2; ++c) {
      Rat before = boundary_intrinsic(p.cells, c).measure();
      std::vector<Box> refined = p.cells;
      const Box picked = refined[rng() % refined.size()];
      refined.erase(std::find(refined.begin(), refined.end(), picked));
      for (Box& ch : children(picked)) refined.push_back(std::move(ch));
      CHECK(boundary_intrinsic(refined, c).measure() == before);
    }
  }
}

TEST_CASE("ds matches the raster oracle on random partitions") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Partition p = random_partition(curve, 8, 4, seed);
    Grid g = minimal_grid(P22, p.cells);
    CHECK(ds(p.cells, g) == oracle::ds_raster(p.cells, g));
    CHECK(boundary(p.cells, g, 2).size() ==
          oracle::vertex_count_raster(p.cells, g));
  }
  // peano, k = 3
  SpaceParams p32{3, 2};
  CurveSpec peano = make_curve("peano", p32);
  for (uint64_t seed = 0; seed < 12; ++seed) {
    Grid g = random_grid(p32, 4, 3, seed);
    Dsfc order = order_cells(peano, g);
    std::mt19937_64 rng(seed);
    size_t a = rng() % order.size(), b = rng() % order.size();
    if (a > b) std::swap(a, b);
    Partition part = partition_from_range(order, a, b);
    Grid mg = minimal_grid(p32, part.cells);
    CHECK(ds(part.cells, mg) == oracle::ds_raster(part.cells, mg));
  }
}

TEST_CASE("whole-grid ds fast path equals the generic path") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Grid g = random_grid(P22, 10, 5, seed);
    CHECK(ds(g.cells, g) ==
          Int(static_cast<long>(boundary(g.cells, g, 1).size())));
  }
}

TEST_CASE("class table of the unit shape") {
  auto t22 = class_table(P22, {unit_box(P22)});
  CHECK(t22[{1, 2}] == 4);
  CHECK(t22.size() == 1);
  SpaceParams p32{3, 2};
  auto t32 = class_table(p32, {unit_box(p32)});
  CHECK(t32[{1, 2}] == 4);
  CHECK(t32[{1, 1}] == 4);
  CHECK(t32[{1, 0}] == 1);
  // the class table partitions the cells of Q*
  long total = 0;
  for (auto& [lr, n] : t32) total += n;
  CHECK(total == 9);
}

TEST_CASE("tower family: growth is linear, M=5 values match") {
  auto family = [&](int m) { return tower(P22, m); };
  auto rows = classification_growth(P22, family, 3, 12);
  for (const GrowthRow& r : rows) {
    CHECK(r.dv_delta <= 4 * r.m);
    CHECK(r.ds_delta <= 4 * r.m);
    CHECK(r.non_classified <= r.m);
  }
  // the classified tower of depth M has 4M-4 cells and surface 5M-2;
  // classify(tower(m)) has depth M = m+1
  for (int m = 3; m <= 8; ++m) {
    ClassifiedView v = classify(P22, tower(P22, m));
    int depth = 0;
    for (const Box& b : v.classified) depth = std::max(depth, b.depth);
    CHECK(depth == m + 1);
    CHECK(v.classified.size() == static_cast<size_t>(4 * (m + 1) - 4));
    CHECK(ds_intrinsic(v.classified) == 5 * (m + 1) - 2);
  }
}

TEST_CASE("tower is a prefix partition of the curve") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (int m = 1; m <= 6; ++m) {
    Partition p = partition_from_cells(P22, tower(P22, m), curve);
    CHECK(p.first == 0);
    CHECK(p.last == static_cast<size_t>(m - 1));
  }
}

TEST_CASE("boundary rejects cells outside the grid") {
  Grid g = subdivide(unit_grid(P22), unit_box(P22));
  CHECK_THROWS(boundary({box2(2, 0, 0)}, g, 1));
  CHECK_THROWS(boundary(std::vector<Box>{}, g, 1));
  CHECK_THROWS(boundary(g.cells, g, 3));
}

TEST_CASE("partition validation") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  // non-consecutive explicit cells are rejected when a curve is attached
  std::vector<Box> cells = {box2(1, 0, 0), box2(1, 1, 0)};  // first and last
  CHECK_THROWS(partition_from_cells(P22, cells, curve));
  CHECK_NOTHROW(partition_from_cells(P22, cells));
  // nested cells are rejected
  CHECK_THROWS(partition_from_cells(P22, {unit_box(P22), box2(1, 0, 0)}));
}

TEST_CASE("partition JSON round-trip") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  Grid g = random_grid(P22, 6, 4, 3);
  Dsfc order = order_cells(curve, g);
  Partition p = partition_from_range(order, 2, 7);
  std::string text = partition_to_json(p);
  Partition back = partition_from_json(text);
  CHECK(back.cells == p.cells);
  CHECK(partition_to_json(back) == text);
  // explicit-cell form
  Partition q = partition_from_cells(P22, example_p());
  Partition qb = partition_from_json(partition_to_json(q));
  CHECK(qb.cells == q.cells);
}

TEST_CASE("non-classified cell count is at most 2 k^d per depth level") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (uint64_t seed = 200; seed < 240; ++seed) {
    Partition p = random_partition(curve, 12, 5, seed);
    int depth = 0;
    for (const Box& b : p.cells) depth = std::max(depth, b.depth);
    std::vector<Box> pre = preclassify(P22, p.cells);
    long nc = static_cast<long>(non_classified_cells(P22, pre).size());
    CHECK(nc <= 8 * std::max(depth, 1));
  }
}

TEST_CASE("depth bounds of classification") {
  CurveSpec curve = make_curve("hilbert2d", P22);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Partition p = random_partition(curve, 10, 4, seed);
    int dp = 0;
    for (const Box& b : p.cells) dp = std::max(dp, b.depth);
    ClassifiedView v = classify(P22, p.cells);
    int dpre = 0, dcls = 0;
    for (const Box& b : v.preclassified) dpre = std::max(dpre, b.depth);
    for (const Box& b : v.classified) dcls = std::max(dcls, b.depth);
    CHECK(dpre == dp);
    CHECK(dcls >= dp);
    CHECK(dcls <= dp + 1);
  }
}
