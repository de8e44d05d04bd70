#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfcpart/partition.hpp"

namespace sfcpart {

struct MeasureReport {
  Int dv;
  Int ds;
  Rat cv;
  Rat cs;
  Rat dr;
  Rat diameter;
};

// Measures of a cell subset with respect to G, or intrinsically (against the
// minimal grid of X) when no grid is given.
MeasureReport measure(const std::vector<Box>& x,
                      const std::optional<Grid>& g = std::nullopt);

// Exact (d-c)-dimensional measure of the codim-c boundary, intrinsic;
// for c = d the vertex count.
Rat cv_boundary(const std::vector<Box>& x, int c);

// Exact l-infinity diameter of content(X).
Rat diameter(const std::vector<Box>& x);

struct BoundsCheck {
  bool ok = false;
  Rat lower;  // (1/U) delta^{d-c}
  Rat value;  // cv(boundary^c)
  Rat upper;  // U delta^{d-c}
};

// U = 2 k^d (1 - k^{c-d})^{-1}
Rat continuous_bound_constant(const SpaceParams& p, int c);

// (1/U) delta^{d-c} <= cv(boundary^c X) <= U delta^{d-c}, exact.
BoundsCheck continuous_bounds_check(const std::vector<Box>& x, int c);

// cs(X)^d <= C^d cv(X)^{d-1} with C = U_1 * U_{d-1}^{d-1}.
bool quasi_optimality_check(const std::vector<Box>& x);

std::string measure_to_json(const MeasureReport& r);

}  // namespace sfcpart
