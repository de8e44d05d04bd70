#pragma once

#include <string>
#include <vector>

#include "sfcpart/generators.hpp"
#include "sfcpart/metrics.hpp"

namespace sfcpart {

// rho(k,d) = (k^{d-1} - 1) / (k^d - 1)
Rat rho(const SpaceParams& p);

// Leading-term profile of the shape-class-regular partitions at codim c:
// V_c ~ v_coefficient * cv(boundary^c Q) k^{M(d-c)} for c < d, and
// V_d ~ v_coefficient * gamma(Q,M); same shape for S_c.
struct AsymptoticProfile {
  int k = 0, d = 0, c = 0;
  Rat rho_value;
  Rat v_coefficient;
  Rat s_coefficient;
};

AsymptoticProfile asymptotic_profile(const SpaceParams& p, int c);

struct VcscResult {
  int c = 0;
  int m = 0;
  Int v_exact;
  Int s_exact;
  Rat r_exact;
  Rat v_predicted;
  Rat s_predicted;
  Rat r_limit;  // c * rho
};

// Exact V_c, S_c, R_c of H_c(Q,M) against the leading-term predictions.
VcscResult vcsc(const SpaceParams& p, const std::vector<Box>& q, int m, int c);

// gamma(Q,M) = sum over depths of A(Q*, l, d) (M - l).
Int gamma_weight(const SpaceParams& p, const std::vector<Box>& q, int m);

struct MuEstimate {
  int c = 0;
  // c < d: best cv(boundary^c Q) found; c = d: best gamma(Q,M)/M^2.
  Rat best_value;
  Rat mu_lower;         // best_value scaled by the theorem coefficient
  Rat analytic_lower;   // binom(d,c) 2^c (c < d), 0 for c = d
  Rat analytic_upper;   // 2k^d/(k^{d-c}-1) (c < d), 2^d k^d for c = d
  std::vector<Box> witness;
  long shapes_seen = 0;
};

// Enumerate candidate shapes through the (first box, last box) pair
// characterization up to depth_bound, evaluate cv(boundary^c) or gamma/M^2.
MuEstimate search_mu(const CurveSpec& curve, int c, int depth_bound, int m);

// Plateau value c*rho, or the descent value (c-1+1/alpha)*rho.
Rat staircase_plateau(const SpaceParams& p, int c);
Rat staircase_descent(const SpaceParams& p, int c, const Rat& alpha);

struct StaircaseRow {
  Int volume;
  Rat ratio;
  int regime_c = 0;
  Rat alpha;
};

// Worst-case ratio profile over volumes between V_{d+1}=M and V_0, from the
// finite-M V_c values of a shape: flat d*rho below V_d, then
// (c-1 + V_c/V) rho on each descent (V_c, V_{c-1}].
std::vector<StaircaseRow> staircase_sweep(const SpaceParams& p,
                                          const std::vector<Box>& q, int m,
                                          int points);

struct TableRow {
  std::string name;
  int k = 0, d = 0, m = 0;
  Int dv_measured, dv_expected;
  Int ds_measured, ds_expected;
  Rat dr;
  Rat dr_limit;
  bool exact_match = false;
};

// The recursive-grid family checks: K(0,0,M), K(1,1,M), K(1,2,M), K(2,2,M)
// at k=2,d=2 and Cantor(M) at k=3,d=2; exact dv/ds closed forms and the
// limiting ratios {0, 1/3, 1/3, 2/3, 1/4}.
std::vector<TableRow> reproduce_table(int max_m);

std::string table_to_csv(const std::vector<TableRow>& rows);
std::string staircase_to_csv(const std::vector<StaircaseRow>& rows);

}  // namespace sfcpart
