#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfcpart/sfc.hpp"
#include "sfcpart/spacetree.hpp"

namespace sfcpart {

// Codimension-c boundary faces, canonically keyed and sorted.
struct FaceSet {
  int codim = 0;
  std::vector<Subcube> faces;

  size_t size() const { return faces.size(); }
  // Exact total (d-c)-dimensional measure; for codim d the face count.
  Rat measure() const;
};

// Boundary faces plus, for each face, the index of the unique cell of X that
// owns it.
struct BoundaryAttribution {
  FaceSet faces;
  std::vector<uint32_t> owner;  // parallel to faces.faces, index into X
};

// The codim-c boundary of X with respect to G: faces of Delta^c G at the
// finest incident resolution that lie on the c-skeleton of exactly one cell
// of X.
FaceSet boundary(const std::vector<Box>& x, const Grid& g, int c);
BoundaryAttribution boundary_with_owners(const std::vector<Box>& x,
                                         const Grid& g, int c);

// Intrinsic variant: boundary with respect to the minimal grid of X.
FaceSet boundary_intrinsic(const std::vector<Box>& x, int c);

// Cell class of every cell of X: the largest c with an owned codim-c face.
std::vector<int> cell_classes(const std::vector<Box>& x, const Grid& g);
int class_of(const Box& cell, const std::vector<Box>& x, const Grid& g);

// Discrete surface |boundary^1|.
Int ds(const std::vector<Box>& x, const Grid& g);
Int ds_intrinsic(const std::vector<Box>& x);

// The unique minimum-cardinality decomposition of content(X).
std::vector<Box> shape(const SpaceParams& p, std::vector<Box> x);
bool is_shape(const SpaceParams& p, const std::vector<Box>& q);

// An SFC partition: a contiguous curve interval of grid cells. The explicit
// cell-list form carries no curve; consecutiveness is validated whenever a
// curve is attached.
struct Partition {
  Grid grid;
  std::optional<CurveSpec> curve;
  size_t first = 0, last = 0;  // inclusive positions when curve is set
  std::vector<Box> cells;
};

Partition partition_from_range(const Dsfc& order, size_t first, size_t last);
// grid = minimal grid of the cells; validates antichain, and consecutiveness
// when a curve is given.
Partition partition_from_cells(const SpaceParams& p, std::vector<Box> cells,
                               std::optional<CurveSpec> curve = std::nullopt);

struct ClassifiedView {
  std::vector<Box> base;           // P
  std::vector<Box> preclassified;  // P~
  std::vector<Box> classified;     // P*
  std::vector<int> classes;        // parallel to `classified`
  std::map<int, long> histogram() const;
  Int class_sum() const;
};

// P~ : refine P towards its boundary so no boundary facet of a cell is
// subdivided.
std::vector<Box> preclassify(const SpaceParams& p, const std::vector<Box>& x);
// P* : P~ with every non-classified cell (owning a parallel facet pair)
// subdivided once.
ClassifiedView classify(const SpaceParams& p, const std::vector<Box>& x);

// Cells of P~ owning more boundary facets than their class.
std::vector<Box> non_classified_cells(const SpaceParams& p,
                                      const std::vector<Box>& preclassified);

// A(Q*, l, r): count of depth-l class-r cells of the classification of Q.
std::map<std::pair<int, int>, long> class_table(const SpaceParams& p,
                                                const std::vector<Box>& q);

struct GrowthRow {
  int m = 0;
  Int dv_delta;  // dv(P*) - dv(P)
  Int ds_delta;  // ds(P*) - ds(P)
  long non_classified = 0;
};

// Per-M classification growth of a partition family.
template <typename Family>
std::vector<GrowthRow> classification_growth(const SpaceParams& p,
                                             const Family& family, int m_lo,
                                             int m_hi) {
  std::vector<GrowthRow> out;
  for (int m = m_lo; m <= m_hi; ++m) {
    std::vector<Box> cells = family(m);
    ClassifiedView v = classify(p, cells);
    GrowthRow row;
    row.m = m;
    row.dv_delta = Int(static_cast<long>(v.classified.size())) -
                   Int(static_cast<long>(cells.size()));
    row.ds_delta = ds_intrinsic(v.classified) - ds_intrinsic(cells);
    row.non_classified =
        static_cast<long>(non_classified_cells(p, v.preclassified).size());
    out.push_back(std::move(row));
  }
  return out;
}

// Partition JSON: grid fields plus {"curve": name, "range": [i, j]} or
// {"cells": [...]} alone.
std::string partition_to_json(const Partition& p);
Partition partition_from_json(const std::string& text);
std::string classified_to_json(const SpaceParams& p, const ClassifiedView& v);

}  // namespace sfcpart
