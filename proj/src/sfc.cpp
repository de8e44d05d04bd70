#include "sfcpart/sfc.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <stdexcept>

namespace sfcpart {

std::string family_name(CurveFamily f) {
  switch (f) {
    case CurveFamily::Hilbert2d: return "hilbert2d";
    case CurveFamily::Peano: return "peano";
    case CurveFamily::Morton: return "morton";
  }
  return "?";
}

CurveFamily family_from_name(const std::string& name) {
  if (name == "hilbert2d") return CurveFamily::Hilbert2d;
  if (name == "peano") return CurveFamily::Peano;
  if (name == "morton") return CurveFamily::Morton;
  throw std::invalid_argument("unknown curve family: " + name);
}

CurveSpec make_curve(CurveFamily family, const SpaceParams& params) {
  validate_params(params);
  CurveSpec c{family, params, 0};
  switch (family) {
    case CurveFamily::Hilbert2d:
      if (params.k != 2 || params.d != 2)
        throw std::invalid_argument("hilbert2d requires k=2, d=2");
      break;
    case CurveFamily::Peano:
      if (params.k != 3)
        throw std::invalid_argument("peano requires k=3");
      break;
    case CurveFamily::Morton:
      if (params.k != 2)
        throw std::invalid_argument("morton requires k=2");
      break;
  }
  return c;
}

CurveSpec make_curve(const std::string& name, const SpaceParams& params) {
  return make_curve(family_from_name(name), params);
}

CurveState initial_state(const CurveSpec& c) {
  CurveState s;
  s.perm.resize(c.params.d);
  for (int i = 0; i < c.params.d; ++i) s.perm[i] = static_cast<uint8_t>(i);
  s.flip = 0;
  return s;
}

static void apply_state(const CurveState& s, const std::vector<int>& motif,
                        int k, std::vector<int>& out) {
  const int d = static_cast<int>(s.perm.size());
  out.resize(d);
  for (int i = 0; i < d; ++i) {
    int v = motif[s.perm[i]];
    out[i] = ((s.flip >> i) & 1u) ? (k - 1 - v) : v;
  }
}

// composed(x) = s(t(x))
static CurveState compose(const CurveState& s, const CurveState& t) {
  const int d = static_cast<int>(s.perm.size());
  CurveState c;
  c.perm.resize(d);
  c.flip = 0;
  for (int i = 0; i < d; ++i) {
    c.perm[i] = t.perm[s.perm[i]];
    uint32_t f = ((s.flip >> i) & 1u) ^ ((t.flip >> s.perm[i]) & 1u);
    c.flip |= f << i;
  }
  return c;
}

// ---- hilbert2d ----
// Base motif (0,0),(0,1),(1,1),(1,0); entry corner (0,0), exit corner (1,0).
// Child transforms: rank 0 transpose, ranks 1-2 identity, rank 3
// anti-transpose.
static const int kHilbertMotif[4][2] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};

static CurveState hilbert_child_transform(int rank) {
  CurveState t;
  t.perm = {0, 1};
  t.flip = 0;
  if (rank == 0) {
    t.perm = {1, 0};
  } else if (rank == 3) {
    t.perm = {1, 0};
    t.flip = 3;
  }
  return t;
}

// ---- peano (k=3, any d) ----
// Serpentine motif: digit t_i of rank (axis 0 fastest), reflected when the
// sum of more-significant digits is odd. Child flips axis i when the sum of
// the other motif digits is odd.
static void peano_motif(int d, int rank, std::vector<int>& out) {
  out.resize(d);
  std::vector<int> t(d);
  int r = rank;
  for (int i = 0; i < d; ++i) {
    t[i] = r % 3;
    r /= 3;
  }
  for (int i = 0; i < d; ++i) {
    int above = 0;
    for (int j = i + 1; j < d; ++j) above += t[j];
    out[i] = (above % 2 == 0) ? t[i] : 2 - t[i];
  }
}

static uint32_t peano_child_flips(const std::vector<int>& motif) {
  const int d = static_cast<int>(motif.size());
  int total = 0;
  for (int v : motif) total += v;
  uint32_t flips = 0;
  for (int i = 0; i < d; ++i)
    if ((total - motif[i]) % 2 != 0) flips |= 1u << i;
  return flips;
}

// ---- morton (k=2, any d) ----
// Bit-interleave, axis 0 least significant; identity state.

void child_of_rank(const CurveSpec& c, const CurveState& state, int rank,
                   std::vector<int>& digits_out, CurveState& next_out) {
  const int d = c.params.d;
  std::vector<int> motif(d);
  switch (c.family) {
    case CurveFamily::Hilbert2d: {
      motif = {kHilbertMotif[rank][0], kHilbertMotif[rank][1]};
      apply_state(state, motif, 2, digits_out);
      next_out = compose(state, hilbert_child_transform(rank));
      return;
    }
    case CurveFamily::Peano: {
      peano_motif(d, rank, motif);
      apply_state(state, motif, 3, digits_out);
      next_out = state;
      next_out.flip ^= peano_child_flips(motif);
      return;
    }
    case CurveFamily::Morton: {
      for (int i = 0; i < d; ++i) motif[i] = (rank >> i) & 1;
      digits_out = motif;
      next_out = state;
      return;
    }
  }
}

int rank_of_child(const CurveSpec& c, const CurveState& state,
                  const std::vector<int>& digits) {
  int kd = 1;
  for (int i = 0; i < c.params.d; ++i) kd *= c.params.k;
  std::vector<int> probe;
  CurveState next;
  for (int r = 0; r < kd; ++r) {
    child_of_rank(c, state, r, probe, next);
    if (probe == digits) return r;
  }
  throw std::logic_error("rank_of_child: digits not found");
}

// Local digits of the depth-(j+1) ancestor of x inside its depth-j ancestor.
static void local_digits(const Box& x, int j, std::vector<int>& out) {
  const int d = x.params.d;
  out.resize(d);
  Int scale = ipow(x.params.k, x.depth - (j + 1));
  for (int i = 0; i < d; ++i) {
    Int v = (x.coords[i] / scale) % x.params.k;
    out[i] = static_cast<int>(v.get_si());
  }
}

Order compare(const CurveSpec& c, const Box& u, const Box& v) {
  if (u.params != v.params || u.params != c.params)
    throw std::invalid_argument("compare: mismatched params");
  if (contains(u, v) || contains(v, u)) return Order::Nested;
  Box l = lca(u, v);
  CurveState state = initial_state(c);
  std::vector<int> digits;
  CurveState next;
  for (int j = 0; j < l.depth; ++j) {
    local_digits(l, j, digits);
    int r = rank_of_child(c, state, digits);
    child_of_rank(c, state, r, digits, next);
    state = next;
  }
  std::vector<int> du, dv;
  local_digits(u, l.depth, du);
  local_digits(v, l.depth, dv);
  int ru = rank_of_child(c, state, du);
  int rv = rank_of_child(c, state, dv);
  return ru < rv ? Order::Before : Order::After;
}

std::vector<uint32_t> Dsfc::positions() const {
  std::vector<uint32_t> pos(seq.size());
  for (uint32_t p = 0; p < seq.size(); ++p) pos[seq[p]] = p;
  return pos;
}

Dsfc order_cells(const CurveSpec& c, const Grid& g) {
  if (c.params != g.params)
    throw std::invalid_argument("order_cells: curve/grid params mismatch");
  Dsfc out;
  out.grid = g;
  out.curve = c;
  out.seq.reserve(g.cells.size());
  int kd = 1;
  for (int i = 0; i < c.params.d; ++i) kd *= c.params.k;

  // Recursive bucket distribution: cells are grouped by the child of the
  // current node that contains them, then visited in rank order.
  std::function<void(const Box&, const CurveState&, std::vector<uint32_t>&)>
      walk = [&](const Box& node, const CurveState& state,
                 std::vector<uint32_t>& idxs) {
        if (idxs.size() == 1 && g.cells[idxs[0]].depth == node.depth) {
          out.seq.push_back(idxs[0]);
          return;
        }
        std::vector<std::vector<uint32_t>> buckets(kd);
        for (uint32_t i : idxs) {
          std::vector<int> loc;
          local_digits(g.cells[i], node.depth, loc);
          int r = rank_of_child(c, state, loc);
          buckets[r].push_back(i);
        }
        std::vector<int> digits;
        CurveState next;
        for (int r = 0; r < kd; ++r) {
          if (buckets[r].empty()) continue;
          child_of_rank(c, state, r, digits, next);
          std::vector<Int> cc(c.params.d);
          for (int i = 0; i < c.params.d; ++i)
            cc[i] = node.coords[i] * c.params.k + digits[i];
          Box childbox(c.params, node.depth + 1, std::move(cc));
          walk(childbox, next, buckets[r]);
        }
      };
  std::vector<uint32_t> all(g.cells.size());
  for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  walk(unit_box(c.params), initial_state(c), all);
  return out;
}

bool check_continuity(const Dsfc& s) {
  for (size_t i = 0; i + 1 < s.size(); ++i)
    if (!adjacent(s.cell_at(i), s.cell_at(i + 1))) return false;
  return true;
}

bool check_space_filling_interval(const Dsfc& s, size_t a, size_t b) {
  if (a > b || b >= s.size())
    throw std::invalid_argument("check_space_filling_interval: bad interval");
  Box fold = s.cell_at(a);
  for (size_t i = a + 1; i <= b; ++i) fold = lca(fold, s.cell_at(i));
  return fold == lca(s.cell_at(a), s.cell_at(b));
}

bool check_space_filling_exhaustive(const Dsfc& s) {
  // For each a, sweep b upward keeping the running fold.
  for (size_t a = 0; a < s.size(); ++a) {
    Box fold = s.cell_at(a);
    for (size_t b = a + 1; b < s.size(); ++b) {
      fold = lca(fold, s.cell_at(b));
      if (!(fold == lca(s.cell_at(a), s.cell_at(b)))) return false;
    }
  }
  return true;
}

bool check_space_filling_sampled(const Dsfc& s, int samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const size_t n = s.size();
  for (int t = 0; t < samples; ++t) {
    size_t a = rng() % n, b = rng() % n;
    if (a > b) std::swap(a, b);
    if (!check_space_filling_interval(s, a, b)) return false;
  }
  return true;
}

bool check_refinement_consistency(const CurveSpec& c, const Grid& g,
                                  const Grid& gp, int samples, uint64_t seed) {
  if (!refines(gp, g))
    throw std::invalid_argument(
        "check_refinement_consistency: second grid does not refine the first");
  Dsfc a = order_cells(c, g);
  Dsfc b = order_cells(c, gp);
  std::vector<Box> ns = nodes(g);
  // first curve position of a cell contained in the node
  auto first_pos = [&](const Dsfc& s, const Box& node) -> size_t {
    for (size_t p = 0; p < s.size(); ++p)
      if (contains(node, s.cell_at(p))) return p;
    throw std::logic_error("node with no cells");
  };
  std::mt19937_64 rng(seed);
  for (int t = 0; t < samples; ++t) {
    const Box& u = ns[rng() % ns.size()];
    const Box& v = ns[rng() % ns.size()];
    if (contains(u, v) || contains(v, u)) continue;
    bool before_g = first_pos(a, u) < first_pos(a, v);
    bool before_gp = first_pos(b, u) < first_pos(b, v);
    if (before_g != before_gp) return false;
    // cross-check against the state-machine comparison
    if ((compare(c, u, v) == Order::Before) != before_g) return false;
  }
  return true;
}

LocalityReport locality_check(const CurveSpec& c, int M, long samples,
                              uint64_t seed) {
  if (!c.continuous())
    throw std::invalid_argument("locality_check: curve is not continuous");
  const int k = c.params.k, d = c.params.d;
  // regular depth-M grid, generated directly in curve order
  std::vector<Box> cells;
  std::function<void(const Box&, const CurveState&)> walk =
      [&](const Box& node, const CurveState& state) {
        if (node.depth == M) {
          cells.push_back(node);
          return;
        }
        int kd = 1;
        for (int i = 0; i < d; ++i) kd *= k;
        std::vector<int> digits;
        CurveState next;
        for (int r = 0; r < kd; ++r) {
          child_of_rank(c, state, r, digits, next);
          std::vector<Int> cc(d);
          for (int i = 0; i < d; ++i)
            cc[i] = node.coords[i] * k + digits[i];
          walk(Box(c.params, node.depth + 1, std::move(cc)), next);
        }
      };
  walk(unit_box(c.params), initial_state(c));

  LocalityReport rep;
  Rat u = (2 * Rat(ipow(k, d))) / (1 - Rat(1, k));
  u.canonicalize();
  rep.bound = rpow(u, d);
  rep.worst_ratio = 0;
  Rat cell_measure = kpow(k, -static_cast<long>(M) * d);

  std::mt19937_64 rng(seed);
  const size_t n = cells.size();
  auto eval_pair = [&](size_t i, size_t j) {
    if (i == j) return;
    // d_inf between centers, in units of k^-M/2 to stay integral
    Int worst = 0;
    for (int a = 0; a < d; ++a) {
      Int diff = abs(cells[i].coords[a] - cells[j].coords[a]);
      worst = std::max(worst, diff);
    }
    Rat dist = Rat(worst) * kpow(k, -M);
    long gap = static_cast<long>(i > j ? i - j : j - i);
    Rat ratio = rpow(dist, d) / (Rat(gap + 2) * cell_measure);
    ratio.canonicalize();
    if (ratio > rep.worst_ratio) rep.worst_ratio = ratio;
    ++rep.pairs;
  };
  if (samples <= 0 || static_cast<unsigned long>(samples) >= n * (n - 1) / 2) {
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) eval_pair(i, j);
  } else {
    for (long t = 0; t < samples; ++t) eval_pair(rng() % n, rng() % n);
  }
  rep.within_bound = rep.worst_ratio <= rep.bound;
  return rep;
}

}  // namespace sfcpart
