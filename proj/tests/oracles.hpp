// Test-only oracles, independent of the library's integer floor-division and
// face-key paths: plain rational interval arithmetic and brute-force
// rasterization.
#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "sfcpart/metrics.hpp"
#include "sfcpart/partition.hpp"

namespace oracle {

using namespace sfcpart;

struct Interval {
  Rat lo, hi;
};

inline Interval axis_interval(const Box& b, int axis) {
  return {b.lo(axis), b.hi(axis)};
}

inline bool box_subset(const Box& inner, const Box& outer) {
  for (int i = 0; i < inner.params.d; ++i) {
    Interval a = axis_interval(inner, i), b = axis_interval(outer, i);
    if (a.lo < b.lo || a.hi > b.hi) return false;
  }
  return true;
}

inline bool boxes_adjacent(const Box& x, const Box& y) {
  int touching = 0, overlapping = 0;
  for (int i = 0; i < x.params.d; ++i) {
    Interval a = axis_interval(x, i), b = axis_interval(y, i);
    Rat lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (lo > hi) return false;
    if (lo == hi)
      ++touching;
    else
      ++overlapping;
  }
  return touching == 1 && overlapping == x.params.d - 1;
}

// cell of the grid covering a depth-L probe box (d=2 only used on small
// cases, but written for any d)
inline const Box* covering_cell(const Grid& g, const std::vector<Int>& probe,
                                int L) {
  for (const Box& cell : g.cells) {
    Int scale = ipow(g.params.k, L - cell.depth);
    bool ok = true;
    for (int i = 0; i < g.params.d; ++i)
      if (probe[i] / scale != cell.coords[i]) ok = false;
    if (ok) return &cell;
  }
  return nullptr;
}

// Brute-force discrete surface: rasterize to the deepest level and weight
// every inside/outside interface fragment by the finest incident cell depth.
// Exact; small cases only.
inline Int ds_raster(const std::vector<Box>& x, const Grid& g) {
  const SpaceParams p = g.params;
  const int L = g.depth();
  BoxSet xset(x);
  auto in_x = [&](const std::vector<Int>& probe) -> const Box* {
    const Box* cell = covering_cell(g, probe, L);
    if (cell && xset.contains(*cell)) return cell;
    return nullptr;
  };
  Int top = ipow(p.k, L);
  Rat total(0);
  std::vector<Int> probe(p.d, Int(0));
  while (true) {
    const Box* me = in_x(probe);
    for (int axis = 0; axis < p.d; ++axis) {
      for (int side = 0; side < 2; ++side) {
        std::vector<Int> nb = probe;
        nb[axis] += side == 0 ? -1 : 1;
        const Box* other = nullptr;
        const Box* other_cell = nullptr;
        bool out_of_domain = nb[axis] < 0 || nb[axis] >= top;
        if (!out_of_domain) {
          other_cell = covering_cell(g, nb, L);
          other = other_cell && xset.contains(*other_cell) ? other_cell
                                                           : nullptr;
        }
        bool boundary = (me != nullptr) != (other != nullptr);
        if (!boundary) continue;
        // count each interface once, from the inside cell
        if (!me) continue;
        const Box* ref = out_of_domain ? me : other_cell;
        int finest = std::max(me->depth, ref ? ref->depth : 0);
        // the fragment is a (d-1)-face of a depth-L box; the face it belongs
        // to has depth `finest`
        total += kpow(p.k, -(L - finest) * (p.d - 1));
      }
    }
    int axis = p.d - 1;
    while (axis >= 0) {
      probe[axis] += 1;
      if (probe[axis] < top) break;
      probe[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  total.canonicalize();
  if (total.get_den() != 1) throw std::logic_error("ds_raster: non-integer");
  return total.get_num();
}

// Brute-force vertex boundary count for d == 2.
inline long vertex_count_raster(const std::vector<Box>& x, const Grid& g) {
  const SpaceParams p = g.params;
  if (p.d != 2) throw std::logic_error("vertex_count_raster: d == 2 only");
  const int L = g.depth();
  BoxSet xset(x);
  Int top = ipow(p.k, L);
  long count = 0;
  for (Int px = 0; px <= top; ++px) {
    for (Int py = 0; py <= top; ++py) {
      // cells of X whose closure contains the lattice point (px, py)
      std::vector<const Box*> owners;
      for (const Box& cell : x) {
        Int scale = ipow(p.k, L - cell.depth);
        if (px >= cell.coords[0] * scale &&
            px <= (cell.coords[0] + 1) * scale &&
            py >= cell.coords[1] * scale &&
            py <= (cell.coords[1] + 1) * scale)
          owners.push_back(&cell);
      }
      if (owners.size() != 1) continue;
      const Box* h = owners[0];
      Int scale = ipow(p.k, L - h->depth);
      bool corner_x = px == h->coords[0] * scale ||
                      px == (h->coords[0] + 1) * scale;
      bool corner_y = py == h->coords[1] * scale ||
                      py == (h->coords[1] + 1) * scale;
      if (corner_x && corner_y) ++count;
    }
  }
  return count;
}

}  // namespace oracle
