#include "sfcpart/metrics.hpp"

#include <stdexcept>

#include <json.hpp>

namespace sfcpart {

MeasureReport measure(const std::vector<Box>& x, const std::optional<Grid>& g) {
  if (x.empty()) throw std::invalid_argument("measure: empty cell subset");
  const SpaceParams& p = x.front().params;
  MeasureReport r;
  r.dv = static_cast<long>(x.size());
  if (g) {
    r.ds = ds(x, *g);
    r.cs = boundary(x, *g, 1).measure();
  } else {
    Grid mg = minimal_grid(p, x);
    r.ds = ds(x, mg);
    r.cs = boundary(x, mg, 1).measure();
  }
  r.cv = coverage(p, x);
  r.dr = Rat(r.ds) / Rat(r.dv);
  r.dr.canonicalize();
  r.diameter = diameter(x);
  return r;
}

Rat cv_boundary(const std::vector<Box>& x, int c) {
  return boundary_intrinsic(x, c).measure();
}

Rat diameter(const std::vector<Box>& x) {
  if (x.empty()) throw std::invalid_argument("diameter: empty cell subset");
  const SpaceParams& p = x.front().params;
  // l-infinity diameter of a finite union of axis-aligned boxes is the
  // largest per-axis bounding width, and it is attained.
  Rat best(0);
  for (int i = 0; i < p.d; ++i) {
    Rat lo = x.front().lo(i), hi = x.front().hi(i);
    for (const Box& b : x) {
      lo = std::min(lo, b.lo(i));
      hi = std::max(hi, b.hi(i));
    }
    Rat w = hi - lo;
    w.canonicalize();
    best = std::max(best, w);
  }
  return best;
}

Rat continuous_bound_constant(const SpaceParams& p, int c) {
  if (c < 0 || c > p.d - 1)
    throw std::invalid_argument("bound constant: c out of [0, d-1]");
  // 2 k^d (1 - k^{c-d})^{-1} = 2 k^d * k^{d-c} / (k^{d-c} - 1)
  Int kdc = ipow(p.k, p.d - c);
  Rat u = 2 * Rat(ipow(p.k, p.d)) * Rat(kdc, kdc - 1);
  u.canonicalize();
  return u;
}

BoundsCheck continuous_bounds_check(const std::vector<Box>& x, int c) {
  const SpaceParams& p = x.front().params;
  BoundsCheck out;
  Rat u = continuous_bound_constant(p, c);
  Rat de = rpow(diameter(x), p.d - c);
  out.lower = de / u;
  out.lower.canonicalize();
  out.upper = de * u;
  out.upper.canonicalize();
  out.value = cv_boundary(x, c);
  out.ok = out.lower <= out.value && out.value <= out.upper;
  return out;
}

bool quasi_optimality_check(const std::vector<Box>& x) {
  const SpaceParams& p = x.front().params;
  if (p.d < 2) return true;
  Rat u1 = continuous_bound_constant(p, 1);
  Rat ud1 = continuous_bound_constant(p, p.d - 1);
  Rat c = u1 * rpow(ud1, p.d - 1);
  Rat cs = cv_boundary(x, 1);
  Rat cv = coverage(p, x);
  // cs <= C cv^{1-1/d}, compared as cs^d <= C^d cv^{d-1}
  return rpow(cs, p.d) <= rpow(c, p.d) * rpow(cv, p.d - 1);
}

std::string measure_to_json(const MeasureReport& r) {
  nlohmann::ordered_json j;
  j["dv"] = r.dv.fits_slong_p() ? nlohmann::ordered_json(r.dv.get_si())
                                : nlohmann::ordered_json(r.dv.get_str());
  j["ds"] = r.ds.fits_slong_p() ? nlohmann::ordered_json(r.ds.get_si())
                                : nlohmann::ordered_json(r.ds.get_str());
  j["cv"] = to_frac_string(r.cv);
  j["cs"] = to_frac_string(r.cs);
  j["dr"] = to_frac_string(r.dr);
  j["diameter"] = to_frac_string(r.diameter);
  return j.dump();
}

}  // namespace sfcpart
