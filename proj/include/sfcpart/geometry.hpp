#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfcpart/rational.hpp"

namespace sfcpart {

// Subdivision factor k and dimension d shared by every box of a space.
// max_depth_cap is a guard against runaway recursion; coordinates are
// arbitrary-precision, so the cap is configuration, not a representation
// limit.
struct SpaceParams {
  int k = 2;
  int d = 2;
  int max_depth_cap = 4096;

  friend bool operator==(const SpaceParams& a, const SpaceParams& b) {
    return a.k == b.k && a.d == b.d;
  }
  friend bool operator!=(const SpaceParams& a, const SpaceParams& b) {
    return !(a == b);
  }
};

void validate_params(const SpaceParams& p);

// Axis-aligned cube of side k^-depth with corners on the k^-depth lattice.
// coords[i] in [0, k^depth); the realized cube is
// [coords[i]*k^-depth, (coords[i]+1)*k^-depth] per axis.
struct Box {
  SpaceParams params;
  int depth = 0;
  std::vector<Int> coords;

  Box() = default;
  Box(SpaceParams p, int l, std::vector<Int> c);

  Rat volume() const { return kpow(params.k, -static_cast<long>(depth) * params.d); }
  Rat lo(int axis) const { return Rat(coords[axis]) * kpow(params.k, -depth); }
  Rat hi(int axis) const { return Rat(coords[axis] + 1) * kpow(params.k, -depth); }

  friend bool operator==(const Box& a, const Box& b) {
    return a.depth == b.depth && a.coords == b.coords && a.params == b.params;
  }
  friend bool operator!=(const Box& a, const Box& b) { return !(a == b); }
};

// Depth-major, then lexicographic coordinates. The canonical cell order.
bool box_less(const Box& a, const Box& b);

// Compact byte key for hashing.
std::string box_key(const Box& b);

Box unit_box(const SpaceParams& p);

bool contains(const Box& outer, const Box& inner);
Box lca(const Box& x, const Box& y);
Box parent(const Box& x);
std::vector<Box> children(const Box& x);
Box ancestor_at(const Box& x, int depth);
bool adjacent(const Box& x, const Box& y);

// Codimension-c face of a box, canonically keyed so that the same face seen
// from two incident boxes compares equal:
//  - an interior high-side clamp is rewritten as the low-side clamp of the
//    neighbouring coordinate; fixed_high survives only on the domain top;
//  - a full-codimension face (a point) is reduced to the shallowest depth
//    expressing it, since its point set does not pin a depth.
struct Subcube {
  SpaceParams params;
  int depth = 0;
  std::vector<Int> coords;
  uint32_t fixed_low = 0;
  uint32_t fixed_high = 0;

  int codim() const;
  bool axis_fixed(int axis) const {
    return ((fixed_low | fixed_high) >> axis) & 1u;
  }
  // span on an axis: [first, second]; a point for fixed axes
  std::pair<Rat, Rat> span(int axis) const;
  // fixed-plane position as an integer in [0, k^depth]
  Int plane_position(int axis) const;

  friend bool operator==(const Subcube& a, const Subcube& b) {
    return a.depth == b.depth && a.fixed_low == b.fixed_low &&
           a.fixed_high == b.fixed_high && a.coords == b.coords &&
           a.params == b.params;
  }
};

bool subcube_less(const Subcube& a, const Subcube& b);
std::string subcube_key(const Subcube& s);

// Canonical face of `owner` with the given clamp masks.
Subcube make_subcube(const Box& owner, uint32_t low_mask, uint32_t high_mask);

// All of Delta^c x; cardinality binom(d,c) * 2^c.
std::vector<Subcube> subcubes(const Box& x, int c);

// Point-set containment between faces of any codimension.
bool subcube_contained(const Subcube& s, const Subcube& t);

// Point-set containment of a face inside a (closed) box.
bool subcube_in_box(const Subcube& s, const Box& b);

// Whether s lies on the codim-c skeleton of b (c = s.codim()): every fixed
// plane of s coincides with a boundary plane of b and the free extent of s
// is inside b.
bool subcube_on_skeleton(const Subcube& s, const Box& b);

uint64_t binom(int n, int r);

}  // namespace sfcpart
