#include "sfcpart/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sfcpart {

Rat rho(const SpaceParams& p) {
  Rat r(ipow(p.k, p.d - 1) - 1, ipow(p.k, p.d) - 1);
  r.canonicalize();
  return r;
}

AsymptoticProfile asymptotic_profile(const SpaceParams& p, int c) {
  if (c < 0 || c > p.d)
    throw std::invalid_argument("asymptotic_profile: c out of [0, d]");
  AsymptoticProfile prof;
  prof.k = p.k;
  prof.d = p.d;
  prof.c = c;
  prof.rho_value = rho(p);
  if (c < p.d) {
    Rat denom(ipow(p.k, p.d - c) - 1);
    prof.v_coefficient = Rat(ipow(p.k, p.d) - 1) / denom;
    prof.s_coefficient = Rat(c) * Rat(ipow(p.k, p.d - 1) - 1) / denom;
  } else {
    prof.v_coefficient = Rat(ipow(p.k, p.d) - 1);
    prof.s_coefficient = Rat(p.d) * Rat(ipow(p.k, p.d - 1) - 1);
  }
  prof.v_coefficient.canonicalize();
  prof.s_coefficient.canonicalize();
  return prof;
}

Int gamma_weight(const SpaceParams& p, const std::vector<Box>& q, int m) {
  auto table = class_table(p, q);
  Int g = 0;
  for (const auto& [lr, count] : table) {
    auto [l, r] = lr;
    if (r != p.d) continue;
    if (m < l) throw std::invalid_argument("gamma: M below depth(Q*)");
    g += Int(count) * (m - l);
  }
  return g;
}

VcscResult vcsc(const SpaceParams& p, const std::vector<Box>& q, int m, int c) {
  VcscResult out;
  out.c = c;
  out.m = m;
  if (c == 0) {
    out.v_exact = h0_volume(p, q, m);
    // every boundary face of Q tiled at depth M
    Rat cs = cv_boundary(q, 1);
    Rat s = cs * Rat(ipow(p.k, static_cast<long>(m) * (p.d - 1)));
    s.canonicalize();
    if (s.get_den() != 1) throw std::logic_error("vcsc: non-integral S_0");
    out.s_exact = s.get_num();
  } else {
    std::vector<Box> h = shape_class_regular(p, q, m, c);
    out.v_exact = static_cast<long>(h.size());
    out.s_exact = ds_intrinsic(h);
  }
  out.r_exact = Rat(out.s_exact) / Rat(out.v_exact);
  out.r_exact.canonicalize();
  AsymptoticProfile prof = asymptotic_profile(p, c);
  if (c < p.d) {
    Rat cvb = cv_boundary(q, c);
    Rat scale = Rat(ipow(p.k, static_cast<long>(m) * (p.d - c)));
    out.v_predicted = prof.v_coefficient * cvb * scale;
    out.s_predicted = prof.s_coefficient * cvb * scale;
  } else {
    Rat g(gamma_weight(p, q, m));
    out.v_predicted = prof.v_coefficient * g;
    out.s_predicted = prof.s_coefficient * g;
  }
  out.v_predicted.canonicalize();
  out.s_predicted.canonicalize();
  out.r_limit = Rat(c) * prof.rho_value;
  out.r_limit.canonicalize();
  return out;
}

MuEstimate search_mu(const CurveSpec& curve, int c, int depth_bound, int m) {
  const SpaceParams& p = curve.params;
  if (c < 0 || c > p.d) throw std::invalid_argument("search_mu: bad c");
  if (c == p.d && m < depth_bound + 2)
    throw std::invalid_argument("search_mu: M too small for gamma at c=d");
  // all boxes of depth <= depth_bound
  std::vector<Box> boxes;
  for (int l = 0; l <= depth_bound; ++l) {
    Int top = ipow(p.k, l);
    std::vector<Int> coords(p.d, Int(0));
    while (true) {
      boxes.emplace_back(p, l, coords);
      int axis = p.d - 1;
      while (axis >= 0) {
        coords[axis] += 1;
        if (coords[axis] < top) break;
        coords[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
  }
  if (boxes.size() > 650)
    throw std::invalid_argument(
        "search_mu: enumeration budget exceeded, reduce the depth bound");

  MuEstimate est;
  est.c = c;
  est.best_value = 0;
  Rat m2 = Rat(static_cast<long>(m)) * Rat(static_cast<long>(m));
  auto consider = [&](std::vector<Box> q) {
    ++est.shapes_seen;
    Rat value;
    if (c < p.d) {
      value = cv_boundary(q, c);
    } else {
      value = Rat(gamma_weight(p, q, m)) / m2;
      value.canonicalize();
    }
    if (value > est.best_value) {
      est.best_value = value;
      est.witness = std::move(q);
    }
  };
  // for c = d the staircase family is the known quadratic-gamma witness
  if (c == p.d && curve.continuous()) {
    for (int n = 2; n < m && n <= 60; n += 2)
      consider(mu2_shape(curve, n));
  }
  for (size_t i = 0; i < boxes.size(); ++i) {
    for (size_t j = 0; j < boxes.size(); ++j) {
      const Box& q1 = boxes[i];
      const Box& qn = boxes[j];
      std::vector<Box> cells;
      if (q1 == qn) {
        cells = {q1};
      } else {
        if (contains(q1, qn) || contains(qn, q1)) continue;
        if (compare(curve, q1, qn) != Order::Before) continue;
        Grid g = minimal_grid(p, {q1, qn});
        Dsfc order = order_cells(curve, g);
        size_t a = order.size(), b = order.size();
        for (size_t pos = 0; pos < order.size(); ++pos) {
          if (order.cell_at(pos) == q1) a = pos;
          if (order.cell_at(pos) == qn) b = pos;
        }
        if (a >= b) continue;
        for (size_t pos = a; pos <= b; ++pos)
          cells.push_back(order.cell_at(pos));
      }
      consider(shape(p, cells));
    }
  }

  if (c < p.d) {
    Rat coeff(ipow(p.k, p.d) - 1, ipow(p.k, p.d - c) - 1);
    est.mu_lower = coeff * est.best_value;
    est.analytic_lower = Rat(static_cast<long>(binom(p.d, c))) *
                         Rat(ipow(2, c));
    est.analytic_upper =
        2 * Rat(ipow(p.k, p.d)) / Rat(ipow(p.k, p.d - c) - 1);
  } else {
    est.mu_lower = Rat(ipow(p.k, p.d) - 1) * est.best_value;
    est.analytic_lower = 0;
    est.analytic_upper = Rat(ipow(2, p.d) * ipow(p.k, p.d));
  }
  est.mu_lower.canonicalize();
  est.analytic_lower.canonicalize();
  est.analytic_upper.canonicalize();
  return est;
}

Rat staircase_plateau(const SpaceParams& p, int c) {
  if (c < 0 || c > p.d)
    throw std::invalid_argument("staircase: c out of [0, d]");
  Rat r = Rat(c) * rho(p);
  r.canonicalize();
  return r;
}

Rat staircase_descent(const SpaceParams& p, int c, const Rat& alpha) {
  if (c < 1 || c > p.d)
    throw std::invalid_argument("staircase: c out of [1, d]");
  if (alpha <= 1) throw std::invalid_argument("staircase: alpha must be > 1");
  Rat r = (Rat(c - 1) + 1 / alpha) * rho(p);
  r.canonicalize();
  return r;
}

std::vector<StaircaseRow> staircase_sweep(const SpaceParams& p,
                                          const std::vector<Box>& q, int m,
                                          int points) {
  // finite-M V_c values; the curve-level convention sets V_{d+1} = M
  std::vector<Int> vc(p.d + 2);
  vc[p.d + 1] = m;
  for (int c = p.d; c >= 1; --c)
    vc[c] = static_cast<long>(shape_class_regular(p, q, m, c).size());
  vc[0] = h0_volume(p, q, m);

  auto ratio_at = [&](const Int& v) -> StaircaseRow {
    StaircaseRow row;
    row.volume = v;
    if (v <= vc[p.d]) {
      row.regime_c = p.d;
      row.alpha = 1;
      row.ratio = staircase_plateau(p, p.d);
      return row;
    }
    for (int c = p.d; c >= 1; --c) {
      if (v <= vc[c - 1]) {
        row.regime_c = c;
        row.alpha = Rat(v) / Rat(vc[c]);
        row.alpha.canonicalize();
        row.ratio = (Rat(c - 1) + Rat(vc[c]) / Rat(v)) * rho(p);
        row.ratio.canonicalize();
        return row;
      }
    }
    throw std::invalid_argument("staircase_sweep: V above V_0");
  };

  std::vector<Int> volumes;
  for (int c = 0; c <= p.d + 1; ++c) volumes.push_back(vc[c]);
  // log-spaced fill between V_{d+1} and V_0
  Rat lo(vc[p.d + 1]), hi(vc[0]);
  for (int i = 1; i < points; ++i) {
    // log-spaced sample volumes; double placement is fine here
    double f = static_cast<double>(i) / points;
    double lv = std::exp((1 - f) * std::log(lo.get_d()) + f * std::log(hi.get_d()));
    Int v(static_cast<long>(lv));
    if (v < vc[p.d + 1]) v = vc[p.d + 1];
    if (v > vc[0]) v = vc[0];
    volumes.push_back(v);
  }
  std::sort(volumes.begin(), volumes.end());
  volumes.erase(std::unique(volumes.begin(), volumes.end()), volumes.end());

  std::vector<StaircaseRow> rows;
  for (const Int& v : volumes) rows.push_back(ratio_at(v));
  return rows;
}

std::vector<TableRow> reproduce_table(int max_m) {
  std::vector<TableRow> rows;
  SpaceParams p22{2, 2};
  struct RowSpec {
    std::string name;
    int c, r;
  };
  const RowSpec kspecs[] = {
      {"K(0,0,M)", 0, 0}, {"K(1,1,M)", 1, 1}, {"K(1,2,M)", 1, 2},
      {"K(2,2,M)", 2, 2}};
  auto expected = [&](const std::string& name, int m) -> std::pair<Int, Int> {
    Int p2m = ipow(2, m);
    if (name == "K(0,0,M)") return {p2m * p2m, 4 * p2m};
    if (name == "K(1,1,M)") return {3 * p2m - 2, p2m + 2 * m + 4};
    if (name == "K(1,2,M)") return {6 * p2m - 3 * m - 5, 2 * p2m + 2 * m + 2};
    if (name == "K(2,2,M)") return {Int(3 * m + 1), Int(2 * m + 6)};
    return {8 * p2m - 7, 2 * p2m + 4 * m + 4};  // Cantor
  };
  auto limit = [&](const std::string& name) -> Rat {
    if (name == "K(0,0,M)") return Rat(0);
    if (name == "K(1,1,M)" || name == "K(1,2,M)") return Rat(1, 3);
    if (name == "K(2,2,M)") return Rat(2, 3);
    return Rat(1, 4);  // Cantor
  };

  for (const RowSpec& rs : kspecs) {
    for (int m = 1; m <= max_m; ++m) {
      ClassRegularSpec spec{p22, rs.c, rs.r, m};
      Grid g = class_regular(spec);
      TableRow row;
      row.name = rs.name;
      row.k = 2;
      row.d = 2;
      row.m = m;
      row.dv_measured = static_cast<long>(g.cells.size());
      row.ds_measured = ds(g.cells, g);
      std::tie(row.dv_expected, row.ds_expected) = expected(rs.name, m);
      row.dr = Rat(row.ds_measured) / Rat(row.dv_measured);
      row.dr.canonicalize();
      row.dr_limit = limit(rs.name);
      row.exact_match = row.dv_measured == row.dv_expected &&
                        row.ds_measured == row.ds_expected;
      rows.push_back(std::move(row));
    }
  }
  for (int m = 1; m <= max_m; ++m) {
    Grid g = cantor_grid(m);
    TableRow row;
    row.name = "Cantor(M)";
    row.k = 3;
    row.d = 2;
    row.m = m;
    row.dv_measured = static_cast<long>(g.cells.size());
    row.ds_measured = ds(g.cells, g);
    std::tie(row.dv_expected, row.ds_expected) = expected("Cantor(M)", m);
    row.dr = Rat(row.ds_measured) / Rat(row.dv_measured);
    row.dr.canonicalize();
    row.dr_limit = limit("Cantor(M)");
    row.exact_match = row.dv_measured == row.dv_expected &&
                      row.ds_measured == row.ds_expected;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << "grid,k,d,M,dv,ds,dr_num,dr_den\n";
  for (const TableRow& r : rows) {
    out << r.name << "," << r.k << "," << r.d << "," << r.m << ","
        << r.dv_measured.get_str() << "," << r.ds_measured.get_str() << ","
        << r.dr.get_num().get_str() << "," << r.dr.get_den().get_str() << "\n";
  }
  return out.str();
}

std::string staircase_to_csv(const std::vector<StaircaseRow>& rows) {
  std::ostringstream out;
  out << "V,R_num,R_den,regime_c,alpha\n";
  for (const StaircaseRow& r : rows) {
    out << r.volume.get_str() << "," << r.ratio.get_num().get_str() << ","
        << r.ratio.get_den().get_str() << "," << r.regime_c << ","
        << to_frac_string(r.alpha) << "\n";
  }
  return out.str();
}

}  // namespace sfcpart
