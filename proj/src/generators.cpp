#include "sfcpart/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace sfcpart {

void validate_class_regular(const ClassRegularSpec& s) {
  validate_params(s.params);
  if (s.c < 0 || s.c > s.r || s.r > s.params.d)
    throw std::invalid_argument("class-regular: need 0 <= c <= r <= d");
  if (s.m < 1) throw std::invalid_argument("class-regular: need M >= 1");
}

int a_count(const Box& v, int r) {
  int a = 0;
  for (int i = 0; i < r; ++i)
    if (v.coords[i] == 0) ++a;
  return a;
}

int b_count(const Box& v, int r) {
  int b = 0;
  for (int i = 0; i < r; ++i)
    if (v.coords[i] <= v.params.k - 1) ++b;
  return b;
}

Grid class_regular(const ClassRegularSpec& s) {
  validate_class_regular(s);
  std::vector<Box> cells = {unit_box(s.params)};
  for (int round = 0; round < s.m; ++round) {
    std::vector<Box> next;
    next.reserve(cells.size() * 2);
    for (const Box& v : cells) {
      // a(H, r) = r >= c, so the root subdivides whenever any cell does
      int a = (v.depth == 0) ? s.r : a_count(v, s.r);
      if (a >= s.c) {
        for (Box& ch : children(v)) next.push_back(std::move(ch));
      } else {
        next.push_back(v);
      }
    }
    cells = std::move(next);
  }
  return Grid(s.params, std::move(cells), true);
}

std::vector<Box> class_regular_closed_cells(const ClassRegularSpec& s) {
  validate_class_regular(s);
  std::vector<Box> out;
  const int k = s.params.k, d = s.params.d;
  for (int l = 1; l <= s.m; ++l) {
    Int top = ipow(k, l);
    std::vector<Int> coords(d, Int(0));
    while (true) {
      Box v(s.params, l, coords);
      int a = a_count(v, s.r), b = b_count(v, s.r);
      bool member = (l == s.m) ? (b >= s.c) : (a <= s.c - 1 && b >= s.c);
      if (member) out.push_back(std::move(v));
      int axis = d - 1;  // lexicographic: last axis fastest
      while (axis >= 0) {
        coords[axis] += 1;
        if (coords[axis] < top) break;
        coords[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
  }
  std::sort(out.begin(), out.end(), box_less);
  return out;
}

namespace {

long long llpow(int base, int exp) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

void check_streamable(const ClassRegularSpec& s) {
  double bits = static_cast<double>(s.m) * std::log2(double(s.params.k));
  if (bits > 40)
    throw std::invalid_argument("class-regular stream: depth too large");
}

}  // namespace

void class_regular_stream_iterative(const ClassRegularSpec& s,
                                    const CellSink& sink) {
  validate_class_regular(s);
  check_streamable(s);
  const int k = s.params.k, d = s.params.d;
  // Replays the subdivision rule along each box's ancestor chain: a depth-l
  // box is a cell iff every proper ancestor had a(.,r) >= c (so it was
  // subdivided down to the box) and the box itself stops (depth M or
  // a(.,r) < c). Emits in canonical depth-major lexicographic order.
  std::vector<long long> coords(d, 0);
  for (int l = 1; l <= s.m; ++l) {
    long long top = llpow(k, l);
    std::fill(coords.begin(), coords.end(), 0);
    while (true) {
      bool exists = true;
      for (int j = 1; j < l && exists; ++j) {
        long long scale = llpow(k, l - j);
        int a = 0;
        for (int i = 0; i < s.r; ++i)
          if (coords[i] / scale == 0) ++a;
        if (a < s.c) exists = false;  // the ancestor was never subdivided
      }
      if (exists) {
        int a = 0;
        for (int i = 0; i < s.r; ++i)
          if (coords[i] == 0) ++a;
        if (l == s.m || a < s.c) sink(l, coords);
      }
      int axis = d - 1;
      while (axis >= 0) {
        coords[axis] += 1;
        if (coords[axis] < top) break;
        coords[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
  }
}

void class_regular_stream_closed(const ClassRegularSpec& s,
                                 const CellSink& sink) {
  validate_class_regular(s);
  check_streamable(s);
  const int k = s.params.k, d = s.params.d;
  std::vector<long long> coords(d, 0);
  for (int l = 1; l <= s.m; ++l) {
    long long top = llpow(k, l);
    std::fill(coords.begin(), coords.end(), 0);
    while (true) {
      int a = 0, b = 0;
      for (int i = 0; i < s.r; ++i) {
        if (coords[i] == 0) ++a;
        if (coords[i] <= k - 1) ++b;
      }
      bool member = (l == s.m) ? (b >= s.c) : (a <= s.c - 1 && b >= s.c);
      if (member) sink(l, coords);
      int axis = d - 1;
      while (axis >= 0) {
        coords[axis] += 1;
        if (coords[axis] < top) break;
        coords[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
  }
}

Int lambda_cell_count(const ClassRegularSpec& s, int l, int a, int b) {
  const int k = s.params.k, d = s.params.d, r = s.r;
  if (a < 0 || b < a || b > r || l < 1) return Int(0);
  Int count = Int(static_cast<long>(binom(r, a))) *
              Int(static_cast<long>(binom(r - a, b - a)));
  count *= ipow(k - 1, b - a);
  Int interior = ipow(k, l) - k;  // coordinates in [k, k^l)
  if (interior < 0) interior = 0;
  count *= ipow(interior, r - b);
  count *= ipow(k, static_cast<long>(l) * (d - r));
  return count;
}

Int a_surface(const Grid& g, int r) {
  Int total = 0;
  for (const Box& v : g.cells) total += a_count(v, r);
  return total;
}

Grid cantor_grid(int m) {
  if (m < 0) throw std::invalid_argument("cantor_grid: negative depth");
  SpaceParams p{3, 2};
  auto cantor_interval = [&](const Int& t, int depth) {
    Int v = t;
    for (int i = 0; i < depth; ++i) {
      Int digit = v % 3;
      if (digit == 1) return false;
      v /= 3;
    }
    return true;
  };
  std::vector<Box> cells = {unit_box(p)};
  for (int round = 0; round < m; ++round) {
    std::vector<Box> next;
    for (const Box& v : cells) {
      bool refine = v.coords[0] == 0 && cantor_interval(v.coords[1], v.depth);
      if (refine) {
        for (Box& ch : children(v)) next.push_back(std::move(ch));
      } else {
        next.push_back(v);
      }
    }
    cells = std::move(next);
  }
  return Grid(p, std::move(cells), true);
}

ShapeClassification classify_shape(const SpaceParams& p,
                                   const std::vector<Box>& q) {
  if (!is_shape(p, q))
    throw std::invalid_argument("classify_shape: input is not a shape");
  ClassifiedView v = classify(p, q);
  ShapeClassification out;
  out.cells = v.classified;
  out.classes = v.classes;
  out.low.assign(out.cells.size(), 0);
  out.high.assign(out.cells.size(), 0);
  Grid g = minimal_grid(p, out.cells);
  BoundaryAttribution attr = boundary_with_owners(out.cells, g, 1);
  for (size_t i = 0; i < attr.faces.faces.size(); ++i) {
    const Subcube& s = attr.faces.faces[i];
    uint32_t owner = attr.owner[i];
    const Box& h = out.cells[owner];
    int axis = -1;
    for (int a = 0; a < p.d; ++a)
      if (s.axis_fixed(a)) axis = a;
    Int scale = ipow(p.k, s.depth - h.depth);
    if (s.plane_position(axis) == h.coords[axis] * scale)
      out.low[owner] |= 1u << axis;
    else
      out.high[owner] |= 1u << axis;
  }
  return out;
}

namespace {

// owned facets touched by a local box (coords relative to the host cell,
// at local depth ld)
int touch_count(const std::vector<Int>& local, int ld, uint32_t low,
                uint32_t high, const SpaceParams& p) {
  Int top = ipow(p.k, ld) - 1;
  int t = 0;
  for (int i = 0; i < p.d; ++i) {
    if (((low >> i) & 1u) && local[i] == 0) ++t;
    if (((high >> i) & 1u) && local[i] == top) ++t;
  }
  return t;
}

Box to_global(const SpaceParams& p, const Box& host,
              const std::vector<Int>& local, int ld) {
  std::vector<Int> g(p.d);
  Int scale = ipow(p.k, ld);
  for (int i = 0; i < p.d; ++i) g[i] = host.coords[i] * scale + local[i];
  return Box(p, host.depth + ld, std::move(g));
}

}  // namespace

std::vector<Box> theta(const SpaceParams& p, const std::vector<Box>& q, int m,
                       int c) {
  ShapeClassification sc = classify_shape(p, q);
  int nstar = 0;
  for (const Box& b : sc.cells) nstar = std::max(nstar, b.depth);
  if (m < nstar)
    throw std::invalid_argument("theta: M below the classification depth");
  if (c == 0) {
    Rat vol = coverage(p, q) * Rat(ipow(p.k, static_cast<long>(m) * p.d));
    vol.canonicalize();
    if (vol.get_den() != 1 || vol.get_num() > 4000000)
      throw std::invalid_argument("theta: c=0 instance too large");
  }
  std::vector<Box> out;
  for (size_t ci = 0; ci < sc.cells.size(); ++ci) {
    const Box& host = sc.cells[ci];
    if (sc.classes[ci] < c) continue;
    const int levels = m - host.depth;
    std::function<void(std::vector<Int>&, int)> walk = [&](std::vector<Int>& local,
                                                           int ld) {
      if (touch_count(local, ld, sc.low[ci], sc.high[ci], p) < c) return;
      if (ld == levels) {
        out.push_back(to_global(p, host, local, ld));
        return;
      }
      std::vector<Int> child(p.d);
      std::vector<int> digit(p.d, 0);
      while (true) {
        for (int i = 0; i < p.d; ++i) child[i] = local[i] * p.k + digit[i];
        walk(child, ld + 1);
        int axis = 0;
        while (axis < p.d && ++digit[axis] == p.k) digit[axis++] = 0;
        if (axis == p.d) break;
      }
    };
    std::vector<Int> local(p.d, Int(0));
    walk(local, 0);
  }
  std::sort(out.begin(), out.end(), box_less);
  return out;
}

std::vector<Box> shape_class_regular(const SpaceParams& p,
                                     const std::vector<Box>& q, int m, int c) {
  if (c < 0 || c > p.d)
    throw std::invalid_argument("shape_class_regular: c out of [0, d]");
  ShapeClassification sc = classify_shape(p, q);
  int nstar = 0;
  for (const Box& b : sc.cells) nstar = std::max(nstar, b.depth);
  if (m < nstar)
    throw std::invalid_argument(
        "shape_class_regular: M below the classification depth");
  if (c == 0) {
    Rat vol = coverage(p, q) * Rat(ipow(p.k, static_cast<long>(m) * p.d));
    vol.canonicalize();
    if (vol.get_den() != 1 || vol.get_num() > 4000000)
      throw std::invalid_argument("shape_class_regular: c=0 instance too large");
  }
  std::vector<Box> out;
  for (size_t ci = 0; ci < sc.cells.size(); ++ci) {
    const Box& host = sc.cells[ci];
    if (sc.classes[ci] < c) {
      out.push_back(host);
      continue;
    }
    const int levels = m - host.depth;
    std::function<void(std::vector<Int>&, int)> walk = [&](std::vector<Int>& local,
                                                           int ld) {
      int t = touch_count(local, ld, sc.low[ci], sc.high[ci], p);
      if (t < c || ld == levels) {
        out.push_back(to_global(p, host, local, ld));
        return;
      }
      std::vector<Int> child(p.d);
      std::vector<int> digit(p.d, 0);
      while (true) {
        for (int i = 0; i < p.d; ++i) child[i] = local[i] * p.k + digit[i];
        walk(child, ld + 1);
        int axis = 0;
        while (axis < p.d && ++digit[axis] == p.k) digit[axis++] = 0;
        if (axis == p.d) break;
      }
    };
    std::vector<Int> local(p.d, Int(0));
    walk(local, 0);
  }
  std::sort(out.begin(), out.end(), box_less);
  return out;
}

Int h0_volume(const SpaceParams& p, const std::vector<Box>& q, int m) {
  Rat vol = coverage(p, q) * Rat(ipow(p.k, static_cast<long>(m) * p.d));
  vol.canonicalize();
  if (vol.get_den() != 1)
    throw std::invalid_argument("h0_volume: M below the shape depth");
  return vol.get_num();
}

VolumeRange befill_volume_range(const SpaceParams& p,
                                const std::vector<Box>& q, int m) {
  ShapeClassification sc = classify_shape(p, q);
  int nstar = 0;
  for (const Box& b : sc.cells) nstar = std::max(nstar, b.depth);
  if (m < nstar)
    throw std::invalid_argument("befill: M below the classification depth");
  VolumeRange r;
  r.modulus = ipow(p.k, p.d) - 1;
  r.v_min = Int(static_cast<long>(sc.cells.size())) + r.modulus * (m - nstar);
  r.v_max = h0_volume(p, q, m);
  return r;
}

namespace {

struct BefillCell {
  Box box;
  size_t host;  // index into the shape classification
  int touch;
};

struct CurveLess {
  const CurveSpec* curve;
  bool operator()(const BefillCell& a, const BefillCell& b) const {
    if (a.box == b.box) return false;
    return compare(*curve, a.box, b.box) == Order::Before;
  }
};

std::vector<Box> befill_impl(const SpaceParams& p, const BefillSpec& spec,
                             bool reversed) {
  ShapeClassification sc = classify_shape(p, spec.shape_q);
  int nstar = 0;
  for (const Box& b : sc.cells) nstar = std::max(nstar, b.depth);
  const int m = spec.m;
  VolumeRange range = befill_volume_range(p, spec.shape_q, m);
  if (spec.volume < range.v_min || spec.volume > range.v_max)
    throw std::invalid_argument("befill: volume outside the admissible range");
  if ((spec.volume - range.v_min) % range.modulus != 0)
    throw std::invalid_argument("befill: volume violates the congruence");

  // V_c for descending c until the regime containing V is found.
  int cstar = -1;
  for (int c = p.d; c >= 1; --c) {
    Int vc;
    if (c == p.d) {
      // V_d = dv(Q*) + (k^d - 1) * gamma(Q, M)
      Int gamma = 0;
      for (size_t i = 0; i < sc.cells.size(); ++i)
        if (sc.classes[i] == p.d) gamma += m - sc.cells[i].depth;
      vc = Int(static_cast<long>(sc.cells.size())) + range.modulus * gamma;
    } else {
      vc = Int(static_cast<long>(shape_class_regular(p, spec.shape_q, m, c).size()));
    }
    if (spec.volume <= vc) {
      cstar = c;
      break;
    }
  }
  if (cstar == -1) cstar = 0;

  // Base partition: H_{c*+1}, where H_{d+1} is the minimal tower to depth M
  // toward the curve-first class-d vertex.
  std::vector<BefillCell> cells;
  auto push_host_cells = [&](size_t hi, const std::vector<Box>& hostcells) {
    for (const Box& b : hostcells) {
      BefillCell bc;
      bc.box = b;
      bc.host = hi;
      std::vector<Int> local(p.d);
      Int scale = ipow(p.k, b.depth - sc.cells[hi].depth);
      for (int i = 0; i < p.d; ++i)
        local[i] = b.coords[i] - sc.cells[hi].coords[i] * scale;
      bc.touch = touch_count(local, b.depth - sc.cells[hi].depth, sc.low[hi],
                             sc.high[hi], p);
      cells.push_back(std::move(bc));
    }
  };

  if (cstar == p.d) {
    // tower base
    size_t tower_host = sc.cells.size();
    for (size_t i = 0; i < sc.cells.size(); ++i) {
      if (sc.classes[i] != p.d) continue;
      if (tower_host == sc.cells.size() ||
          compare(spec.curve, sc.cells[i], sc.cells[tower_host]) ==
              Order::Before)
        tower_host = i;
    }
    if (tower_host == sc.cells.size())
      throw std::invalid_argument("befill: shape has no class-d cell");
    for (size_t i = 0; i < sc.cells.size(); ++i) {
      if (i == tower_host) continue;
      push_host_cells(i, {sc.cells[i]});
    }
    // chain toward the corner where the owned facets meet
    Box cur = sc.cells[tower_host];
    while (cur.depth < m) {
      std::vector<Box> kids = children(cur);
      Box corner = cur;  // placeholder
      std::vector<Box> rest;
      for (Box& ch : kids) {
        std::vector<Int> local(p.d);
        Int scale = ipow(p.k, ch.depth - sc.cells[tower_host].depth);
        for (int i = 0; i < p.d; ++i)
          local[i] = ch.coords[i] - sc.cells[tower_host].coords[i] * scale;
        if (touch_count(local, ch.depth - sc.cells[tower_host].depth,
                        sc.low[tower_host], sc.high[tower_host], p) == p.d)
          corner = ch;
        else
          rest.push_back(ch);
      }
      push_host_cells(tower_host, rest);
      cur = corner;
    }
    push_host_cells(tower_host, {cur});
  } else {
    std::vector<Box> base = shape_class_regular(p, spec.shape_q, m, cstar + 1);
    // attribute each base cell to its host Q* cell
    BoxSet hostset(sc.cells);
    std::unordered_map<std::string, size_t> hostidx;
    for (size_t i = 0; i < sc.cells.size(); ++i)
      hostidx.emplace(box_key(sc.cells[i]), i);
    for (const Box& b : base) {
      Box cur = b;
      while (!hostset.contains(cur)) cur = parent(cur);
      push_host_cells(hostidx.at(box_key(cur)), {b});
    }
  }

  // eligible: touch == c*, depth < M, subdivided in curve order
  CurveLess less{&spec.curve};
  auto cmp = [&](const BefillCell& a, const BefillCell& b) {
    return reversed ? less(b, a) : less(a, b);
  };
  std::set<BefillCell, decltype(cmp)> eligible(cmp);
  for (const BefillCell& bc : cells)
    if (bc.touch == cstar && bc.box.depth < m) eligible.insert(bc);

  Int dv = static_cast<long>(cells.size());
  std::vector<Box> done;
  for (const BefillCell& bc : cells)
    if (!(bc.touch == cstar && bc.box.depth < m)) done.push_back(bc.box);

  while (dv < spec.volume) {
    if (eligible.empty())
      throw std::logic_error("befill: ran out of eligible cells");
    BefillCell bc = *eligible.begin();
    eligible.erase(eligible.begin());
    for (Box& ch : children(bc.box)) {
      BefillCell cc;
      cc.host = bc.host;
      std::vector<Int> local(p.d);
      Int scale = ipow(p.k, ch.depth - sc.cells[bc.host].depth);
      for (int i = 0; i < p.d; ++i)
        local[i] = ch.coords[i] - sc.cells[bc.host].coords[i] * scale;
      cc.touch = touch_count(local, ch.depth - sc.cells[bc.host].depth,
                             sc.low[bc.host], sc.high[bc.host], p);
      cc.box = std::move(ch);
      if (cc.touch == cstar && cc.box.depth < m)
        eligible.insert(std::move(cc));
      else
        done.push_back(std::move(cc.box));
    }
    dv += range.modulus;
  }
  for (const BefillCell& bc : eligible) done.push_back(bc.box);
  std::sort(done.begin(), done.end(), box_less);
  return done;
}

}  // namespace

std::vector<Box> befill(const SpaceParams& p, const BefillSpec& spec) {
  return befill_impl(p, spec, false);
}

std::vector<Box> befill_reversed(const SpaceParams& p, const BefillSpec& spec) {
  return befill_impl(p, spec, true);
}

std::vector<Box> mu2_shape(const CurveSpec& curve, int n) {
  if (!curve.continuous())
    throw std::invalid_argument("mu2_shape: curve must be continuous");
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("mu2_shape: N must be even and >= 2");
  const SpaceParams& p = curve.params;
  // grandchildren of a box in curve order
  auto expand2 = [&](const Box& b) {
    std::vector<Box> cells;
    std::function<void(const Box&)> gather = [&](const Box& cur) {
      if (cur.depth == b.depth + 2) {
        cells.push_back(cur);
        return;
      }
      for (const Box& ch : children(cur)) gather(ch);
    };
    gather(b);
    // order the grandchildren with the global curve
    std::sort(cells.begin(), cells.end(), [&](const Box& a, const Box& bb) {
      return compare(curve, a, bb) == Order::Before;
    });
    return cells;
  };

  std::vector<Box> list = expand2(unit_box(p));  // G_2 in curve order
  for (int m = 4; m <= n; m += 2) {
    size_t idx = static_cast<size_t>(m / 2 - 1);
    std::vector<Box> grand = expand2(list[idx]);
    list.erase(list.begin() + static_cast<long>(idx));
    list.insert(list.begin() + static_cast<long>(idx), grand.begin(),
                grand.end());
  }
  std::vector<Box> q(list.begin(), list.begin() + n / 2);
  std::sort(q.begin(), q.end(), box_less);
  return q;
}

std::vector<Box> tower(const SpaceParams& p, int m) {
  if (p.k != 2 || p.d != 2)
    throw std::invalid_argument("tower: fixture is k=2, d=2");
  if (m < 1) throw std::invalid_argument("tower: need M >= 1");
  std::vector<Box> cells;
  for (int l = 1; l <= m; ++l) {
    std::vector<Int> c(2);
    c[0] = 0;
    c[1] = ipow(2, l) - 2;
    cells.emplace_back(p, l, std::move(c));
  }
  return cells;
}

}  // namespace sfcpart
