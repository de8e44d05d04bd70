#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sfcpart/partition.hpp"

namespace sfcpart {

// K(c,r,M): refine, M times over, every cell whose first r coordinates
// include at least c zeros.
struct ClassRegularSpec {
  SpaceParams params;
  int c = 0;
  int r = 0;
  int m = 1;
};

void validate_class_regular(const ClassRegularSpec& s);

// a(v,r) = |{i <= r : v_i = 0}|, b(v,r) = |{i <= r : v_i <= k-1}|
int a_count(const Box& v, int r);
int b_count(const Box& v, int r);

// Construction (1): iterative subdivision rounds.
Grid class_regular(const ClassRegularSpec& s);
// Construction (2): closed-form cell enumeration by depth.
std::vector<Box> class_regular_closed_cells(const ClassRegularSpec& s);

// Streaming forms, emitting (depth, coords) in canonical order without
// materializing; restricted to sizes where coordinates fit in int64.
using CellSink = std::function<void(int, const std::vector<long long>&)>;
void class_regular_stream_iterative(const ClassRegularSpec& s,
                                    const CellSink& sink);
void class_regular_stream_closed(const ClassRegularSpec& s,
                                 const CellSink& sink);

// |Lambda(l,a,b)| by the product formula.
Int lambda_cell_count(const ClassRegularSpec& s, int l, int a, int b);

// as(K) = sum of a(v,r) over cells.
Int a_surface(const Grid& k, int r);

// Cantor grid, k=3, d=2: M rounds of refining the cells on the {x1=0} side
// whose x2 range is a level interval of the Cantor construction (all base-3
// digits in {0,2}).
Grid cantor_grid(int m);

// The classification of a shape with, per cell, its owned facet sides.
struct ShapeClassification {
  std::vector<Box> cells;      // Q*
  std::vector<int> classes;    // per cell
  std::vector<uint32_t> low;   // owned facet side masks
  std::vector<uint32_t> high;
};

ShapeClassification classify_shape(const SpaceParams& p,
                                   const std::vector<Box>& q);

// Theta_c(Q,M): depth-M boxes in content(Q) of class >= c. Materialized;
// guarded against very large c=0 instances.
std::vector<Box> theta(const SpaceParams& p, const std::vector<Box>& q, int m,
                       int c);

// H_c(Q,M): Q* refined, inside every cell of class r >= c, by the K(c,r,.)
// pattern toward its owned facets, down to depth M.
std::vector<Box> shape_class_regular(const SpaceParams& p,
                                     const std::vector<Box>& q, int m, int c);

// Exact dv(H_0) = cv(Q) k^{Md}, without materializing.
Int h0_volume(const SpaceParams& p, const std::vector<Box>& q, int m);

struct BefillSpec {
  std::vector<Box> shape_q;
  Int volume;
  int m = 1;
  CurveSpec curve;
};

// The admissible volume range [V_{d+1}, V_0] and its modulus k^d - 1.
struct VolumeRange {
  Int v_min;
  Int v_max;
  Int modulus;
};
VolumeRange befill_volume_range(const SpaceParams& p,
                                const std::vector<Box>& q, int m);

// H(Q,V,M): from H_{c+1}(Q,M), subdivide eligible class-c cells in curve
// order until dv = V. Classified, deterministic, surface-maximal.
std::vector<Box> befill(const SpaceParams& p, const BefillSpec& spec);
// Variant subdividing eligible cells in reverse curve order (the surface is
// order-independent; used by property tests).
std::vector<Box> befill_reversed(const SpaceParams& p, const BefillSpec& spec);

// The staircase shape Q_N of the diagonal double-subdivision grid: N/2 cells,
// cell m of depth 2m+2, consecutive along the curve.
std::vector<Box> mu2_shape(const CurveSpec& curve, int n);

// Tower fixture (k=2, d=2): M cells hugging the left edge, one per depth,
// cell at depth l at coordinates (0, 2^l - 2). A curve-prefix partition.
std::vector<Box> tower(const SpaceParams& p, int m);

}  // namespace sfcpart
