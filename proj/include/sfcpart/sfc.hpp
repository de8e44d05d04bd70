#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfcpart/spacetree.hpp"

namespace sfcpart {

enum class CurveFamily { Hilbert2d, Peano, Morton };

std::string family_name(CurveFamily f);
CurveFamily family_from_name(const std::string& name);

// A space-filling curve instance. The motif is table-driven; the base
// orientation is fixed so the curve enters at the all-zeros corner
// (orientation id 0, the only one exposed).
struct CurveSpec {
  CurveFamily family = CurveFamily::Hilbert2d;
  SpaceParams params;
  int base_orientation = 0;

  bool continuous() const { return family != CurveFamily::Morton; }
};

CurveSpec make_curve(CurveFamily family, const SpaceParams& params);
CurveSpec make_curve(const std::string& name, const SpaceParams& params);

// Orientation state: child coords = flip/permute of the base motif.
// apply(x)_i = flip_i ? k-1-x[perm_i] : x[perm_i].
struct CurveState {
  std::vector<uint8_t> perm;
  uint32_t flip = 0;
};

CurveState initial_state(const CurveSpec& c);
// Local coordinates (digits in [0,k)) of the rank-th child under `state`,
// and the state for that child's subtree.
void child_of_rank(const CurveSpec& c, const CurveState& state, int rank,
                   std::vector<int>& digits_out, CurveState& next_out);
// Inverse: rank of the child with the given local digits.
int rank_of_child(const CurveSpec& c, const CurveState& state,
                  const std::vector<int>& digits);

enum class Order { Before, After, Nested };

// Total order induced by the curve on non-nested boxes; Nested when one
// contains the other. Refinement-invariant by construction.
Order compare(const CurveSpec& c, const Box& u, const Box& v);

struct Dsfc {
  Grid grid;
  CurveSpec curve;
  // seq[position] = index into grid.cells
  std::vector<uint32_t> seq;

  const Box& cell_at(size_t pos) const { return grid.cells[seq[pos]]; }
  size_t size() const { return seq.size(); }
  // position of each grid cell along the curve
  std::vector<uint32_t> positions() const;
};

Dsfc order_cells(const CurveSpec& c, const Grid& g);

bool check_continuity(const Dsfc& s);

// Space-filling characterization on an index interval [a, b] (0-based,
// inclusive): lca(g_a, g_b) == fold of lca over the whole interval.
bool check_space_filling_interval(const Dsfc& s, size_t a, size_t b);
// Exhaustive over all intervals.
bool check_space_filling_exhaustive(const Dsfc& s);
// Sampled intervals, seeded.
bool check_space_filling_sampled(const Dsfc& s, int samples, uint64_t seed);

// For node pairs of G ordered by Phi(G), the order is preserved in Phi(G').
// Requires refines(gp, g). Sampled node pairs, seeded.
bool check_refinement_consistency(const CurveSpec& c, const Grid& g,
                                  const Grid& gp, int samples, uint64_t seed);

struct LocalityReport {
  Rat worst_ratio;   // max d_inf(centers)^d / ((|i-j|+2) k^{-Md})
  Rat bound;         // U^d with U = 2k^d (1-1/k)^{-1}
  bool within_bound = false;
  size_t pairs = 0;
};

// Finite-scale Hoelder diagnostic on the regular depth-M DSFC.
LocalityReport locality_check(const CurveSpec& c, int M, long samples,
                              uint64_t seed);

}  // namespace sfcpart
