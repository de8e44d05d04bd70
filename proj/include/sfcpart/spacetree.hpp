#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "sfcpart/geometry.hpp"

namespace sfcpart {

// A grid is a finite maximal antichain of boxes covering the unit hypercube,
// stored in canonical order (depth-major, then lexicographic coordinates).
struct Grid {
  SpaceParams params;
  std::vector<Box> cells;

  Grid() = default;
  // Sorts into canonical order; set `trusted` when the caller guarantees the
  // cell set already is a grid (construction by subdivision).
  Grid(SpaceParams p, std::vector<Box> cs, bool trusted = false);

  int depth() const;
  size_t size() const { return cells.size(); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.params == b.params && a.cells == b.cells;
  }
};

// Hash set of box keys; answers "is this box in the set / does it have an
// ancestor in the set" in O(depth) lookups.
class BoxSet {
 public:
  BoxSet() = default;
  explicit BoxSet(const std::vector<Box>& boxes);
  void insert(const Box& b) { keys_.insert(box_key(b)); }
  bool contains(const Box& b) const { return keys_.count(box_key(b)) > 0; }
  // Deepest member that contains b (itself or a strict ancestor), as depth;
  // -1 when none.
  int covering_depth(const Box& b) const;
  size_t size() const { return keys_.size(); }

 private:
  std::unordered_set<std::string> keys_;
};

Grid unit_grid(const SpaceParams& p);

// Replace cell x of G by its k^d children.
Grid subdivide(const Grid& g, const Box& x);

bool is_grid(const SpaceParams& p, const std::vector<Box>& cells);

// Coverage of a box set as an exact fraction of the unit hypercube.
Rat coverage(const SpaceParams& p, const std::vector<Box>& cells);

// Minimal grid G(X): subdivide, from the unit grid, exactly the boxes that
// strictly contain an element of X.
Grid minimal_grid(const SpaceParams& p, const std::vector<Box>& x);

// Common refinement.
Grid meet(const Grid& g, const Grid& h);

bool refines(const Grid& g, const Grid& h);

// Cells plus all strict ancestors of cells.
std::vector<Box> nodes(const Grid& g);
Rat node_count_bound(const Grid& g);

// Cells of G contained in content(Q); throws if content(Q) is not a union of
// cells of G.
std::vector<Box> restrict_to(const Grid& g, const std::vector<Box>& q);

// Seeded generator: T subdivisions, each picking a uniformly random cell
// below max_depth.
Grid random_grid(const SpaceParams& p, int subdivisions, int max_depth,
                 uint64_t seed);

// Grid JSON: {"k":int,"d":int,"cells":[{"l":int,"x":[...]},...]} with cells
// in canonical order. Coordinates too wide for 64-bit serialize as decimal
// strings.
std::string grid_to_json(const Grid& g);
Grid grid_from_json(const std::string& text);

}  // namespace sfcpart
