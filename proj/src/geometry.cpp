#include "sfcpart/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace sfcpart {

void validate_params(const SpaceParams& p) {
  if (p.k < 2) throw std::invalid_argument("SpaceParams: k must be >= 2");
  if (p.d < 1) throw std::invalid_argument("SpaceParams: d must be >= 1");
  if (p.d > 30) throw std::invalid_argument("SpaceParams: d too large");
}

static void check_same_params(const SpaceParams& a, const SpaceParams& b) {
  if (a != b) throw std::invalid_argument("boxes have mismatched (k, d)");
}

Box::Box(SpaceParams p, int l, std::vector<Int> c)
    : params(p), depth(l), coords(std::move(c)) {
  validate_params(params);
  if (depth < 0) throw std::invalid_argument("Box: negative depth");
  if (static_cast<int>(coords.size()) != params.d)
    throw std::invalid_argument("Box: coordinate count != d");
  Int limit = ipow(params.k, depth);
  for (const Int& c_i : coords)
    if (c_i < 0 || c_i >= limit)
      throw std::invalid_argument("Box: coordinate out of [0, k^depth)");
}

bool box_less(const Box& a, const Box& b) {
  if (a.depth != b.depth) return a.depth < b.depth;
  for (int i = 0; i < a.params.d; ++i) {
    int c = cmp(a.coords[i], b.coords[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

static void append_int(std::string& out, const Int& v) {
  size_t count = 0;
  // values are non-negative here
  std::vector<uint8_t> buf((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
  mpz_export(buf.data(), &count, 1, 1, 0, 0, v.get_mpz_t());
  out.push_back(static_cast<char>(count));
  out.append(reinterpret_cast<const char*>(buf.data()), count);
}

std::string box_key(const Box& b) {
  std::string out;
  out.reserve(2 + 4 * b.params.d);
  out.push_back(static_cast<char>(b.depth & 0xff));
  out.push_back(static_cast<char>((b.depth >> 8) & 0xff));
  for (const Int& c : b.coords) append_int(out, c);
  return out;
}

Box unit_box(const SpaceParams& p) {
  return Box(p, 0, std::vector<Int>(p.d, Int(0)));
}

bool contains(const Box& outer, const Box& inner) {
  check_same_params(outer.params, inner.params);
  if (inner.depth < outer.depth) return false;
  Int scale = ipow(outer.params.k, inner.depth - outer.depth);
  for (int i = 0; i < outer.params.d; ++i)
    if (inner.coords[i] / scale != outer.coords[i]) return false;
  return true;
}

Box ancestor_at(const Box& x, int depth) {
  if (depth > x.depth || depth < 0)
    throw std::invalid_argument("ancestor_at: bad depth");
  Int scale = ipow(x.params.k, x.depth - depth);
  std::vector<Int> c(x.params.d);
  for (int i = 0; i < x.params.d; ++i) c[i] = x.coords[i] / scale;
  return Box(x.params, depth, std::move(c));
}

Box lca(const Box& x, const Box& y) {
  check_same_params(x.params, y.params);
  int m = std::min(x.depth, y.depth);
  Box a = ancestor_at(x, m);
  Box b = ancestor_at(y, m);
  while (a.coords != b.coords) {
    --m;
    for (int i = 0; i < x.params.d; ++i) {
      a.coords[i] /= x.params.k;
      b.coords[i] /= x.params.k;
    }
    a.depth = b.depth = m;
  }
  return a;
}

Box parent(const Box& x) {
  if (x.depth == 0) throw std::invalid_argument("parent: root has no parent");
  return ancestor_at(x, x.depth - 1);
}

std::vector<Box> children(const Box& x) {
  if (x.depth >= x.params.max_depth_cap)
    throw std::invalid_argument("children: depth cap exceeded");
  const int k = x.params.k, d = x.params.d;
  size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<size_t>(k);
  std::vector<Box> out;
  out.reserve(n);
  std::vector<int> digit(d, 0);
  std::vector<Int> base(d);
  for (int i = 0; i < d; ++i) base[i] = x.coords[i] * k;
  while (true) {
    std::vector<Int> c(d);
    for (int i = 0; i < d; ++i) c[i] = base[i] + digit[i];
    out.emplace_back(x.params, x.depth + 1, std::move(c));
    int axis = 0;
    while (axis < d && ++digit[axis] == k) digit[axis++] = 0;
    if (axis == d) break;
  }
  return out;
}

// Closed-interval relation per axis after rescaling to a common depth.
// Returns 0 for empty, 1 for single-point, 2 for positive-length overlap.
static int axis_overlap(const Box& x, const Box& y, int axis) {
  int m = std::max(x.depth, y.depth);
  Int xl = x.coords[axis] * ipow(x.params.k, m - x.depth);
  Int xh = (x.coords[axis] + 1) * ipow(x.params.k, m - x.depth);
  Int yl = y.coords[axis] * ipow(y.params.k, m - y.depth);
  Int yh = (y.coords[axis] + 1) * ipow(y.params.k, m - y.depth);
  Int lo = std::max(xl, yl);
  Int hi = std::min(xh, yh);
  if (lo > hi) return 0;
  if (lo == hi) return 1;
  return 2;
}

bool adjacent(const Box& x, const Box& y) {
  check_same_params(x.params, y.params);
  int points = 0, positive = 0;
  for (int i = 0; i < x.params.d; ++i) {
    int o = axis_overlap(x, y, i);
    if (o == 0) return false;
    if (o == 1) ++points;
    if (o == 2) ++positive;
  }
  return points == 1 && positive == x.params.d - 1;
}

int Subcube::codim() const {
  return __builtin_popcount(fixed_low) + __builtin_popcount(fixed_high);
}

std::pair<Rat, Rat> Subcube::span(int axis) const {
  Rat unit = kpow(params.k, -depth);
  if ((fixed_low >> axis) & 1u) {
    Rat p = Rat(coords[axis]) * unit;
    return {p, p};
  }
  if ((fixed_high >> axis) & 1u) {
    Rat p = Rat(coords[axis] + 1) * unit;
    return {p, p};
  }
  return {Rat(coords[axis]) * unit, Rat(coords[axis] + 1) * unit};
}

Int Subcube::plane_position(int axis) const {
  if ((fixed_low >> axis) & 1u) return coords[axis];
  if ((fixed_high >> axis) & 1u) return coords[axis] + 1;
  throw std::invalid_argument("plane_position: axis not fixed");
}

bool subcube_less(const Subcube& a, const Subcube& b) {
  if (a.depth != b.depth) return a.depth < b.depth;
  if (a.fixed_low != b.fixed_low) return a.fixed_low < b.fixed_low;
  if (a.fixed_high != b.fixed_high) return a.fixed_high < b.fixed_high;
  for (int i = 0; i < a.params.d; ++i) {
    int c = cmp(a.coords[i], b.coords[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::string subcube_key(const Subcube& s) {
  std::string out;
  out.reserve(6 + 4 * s.params.d);
  out.push_back(static_cast<char>(s.depth & 0xff));
  out.push_back(static_cast<char>((s.depth >> 8) & 0xff));
  out.push_back(static_cast<char>(s.fixed_low & 0xff));
  out.push_back(static_cast<char>((s.fixed_low >> 8) & 0xff));
  out.push_back(static_cast<char>(s.fixed_high & 0xff));
  out.push_back(static_cast<char>((s.fixed_high >> 8) & 0xff));
  for (const Int& c : s.coords) append_int(out, c);
  return out;
}

Subcube make_subcube(const Box& owner, uint32_t low_mask, uint32_t high_mask) {
  if (low_mask & high_mask)
    throw std::invalid_argument("make_subcube: overlapping clamp masks");
  Subcube s;
  s.params = owner.params;
  s.depth = owner.depth;
  s.coords = owner.coords;
  s.fixed_low = low_mask;
  s.fixed_high = high_mask;
  const int d = owner.params.d;
  Int top = ipow(owner.params.k, owner.depth) - 1;
  // interior high clamps become low clamps of the next coordinate
  for (int i = 0; i < d; ++i) {
    if ((s.fixed_high >> i) & 1u) {
      if (s.coords[i] < top) {
        s.coords[i] += 1;
        s.fixed_high &= ~(1u << i);
        s.fixed_low |= (1u << i);
      }
    }
  }
  // a point face is expressed at the shallowest depth
  if (s.codim() == d) {
    while (s.depth > 0) {
      bool divisible = true;
      for (int i = 0; i < d; ++i) {
        Int pos = ((s.fixed_low >> i) & 1u) ? s.coords[i] : s.coords[i] + 1;
        if (pos % owner.params.k != 0) {
          divisible = false;
          break;
        }
      }
      if (!divisible) break;
      Int nt = ipow(owner.params.k, s.depth - 1) - 1;
      uint32_t nlow = 0, nhigh = 0;
      std::vector<Int> nc(d);
      for (int i = 0; i < d; ++i) {
        Int pos = ((s.fixed_low >> i) & 1u) ? s.coords[i] : s.coords[i] + 1;
        pos /= owner.params.k;
        if (pos <= nt) {
          nc[i] = pos;
          nlow |= (1u << i);
        } else {
          nc[i] = pos - 1;
          nhigh |= (1u << i);
        }
      }
      s.depth -= 1;
      s.coords = std::move(nc);
      s.fixed_low = nlow;
      s.fixed_high = nhigh;
    }
  }
  return s;
}

std::vector<Subcube> subcubes(const Box& x, int c) {
  const int d = x.params.d;
  if (c < 0 || c > d) throw std::invalid_argument("subcubes: c out of [0, d]");
  std::vector<Subcube> out;
  for (uint32_t axes = 0; axes < (1u << d); ++axes) {
    if (__builtin_popcount(axes) != c) continue;
    // every low/high assignment of the chosen axes
    uint32_t sub = 0;
    while (true) {
      out.push_back(make_subcube(x, axes & ~sub, sub));
      if (sub == axes) break;
      sub = (sub - axes) & axes;  // next subset of `axes`
    }
  }
  return out;
}

// span on an axis as integers scaled to depth m >= s.depth: [lo, hi]
static std::pair<Int, Int> scaled_span(const Subcube& s, int axis, int m) {
  Int scale = ipow(s.params.k, m - s.depth);
  if ((s.fixed_low >> axis) & 1u) {
    Int p = s.coords[axis] * scale;
    return {p, p};
  }
  if ((s.fixed_high >> axis) & 1u) {
    Int p = (s.coords[axis] + 1) * scale;
    return {p, p};
  }
  return {s.coords[axis] * scale, (s.coords[axis] + 1) * scale};
}

bool subcube_contained(const Subcube& s, const Subcube& t) {
  check_same_params(s.params, t.params);
  int m = std::max(s.depth, t.depth);
  for (int i = 0; i < s.params.d; ++i) {
    auto [sl, sh] = scaled_span(s, i, m);
    auto [tl, th] = scaled_span(t, i, m);
    if (sl < tl || sh > th) return false;
  }
  return true;
}

bool subcube_in_box(const Subcube& s, const Box& b) {
  check_same_params(s.params, b.params);
  int m = std::max(s.depth, b.depth);
  Int bscale = ipow(b.params.k, m - b.depth);
  for (int i = 0; i < s.params.d; ++i) {
    auto [sl, sh] = scaled_span(s, i, m);
    Int bl = b.coords[i] * bscale;
    Int bh = (b.coords[i] + 1) * bscale;
    if (sl < bl || sh > bh) return false;
  }
  return true;
}

bool subcube_on_skeleton(const Subcube& s, const Box& b) {
  check_same_params(s.params, b.params);
  int m = std::max(s.depth, b.depth);
  Int bscale = ipow(b.params.k, m - b.depth);
  for (int i = 0; i < s.params.d; ++i) {
    auto [sl, sh] = scaled_span(s, i, m);
    Int bl = b.coords[i] * bscale;
    Int bh = (b.coords[i] + 1) * bscale;
    if (s.axis_fixed(i)) {
      if (sl != bl && sl != bh) return false;
    } else {
      if (sl < bl || sh > bh) return false;
    }
  }
  return true;
}

uint64_t binom(int n, int r) {
  if (r < 0 || r > n) return 0;
  uint64_t v = 1;
  for (int i = 1; i <= r; ++i) v = v * static_cast<uint64_t>(n - r + i) / i;
  return v;
}

}  // namespace sfcpart
