#include "sfcpart/spacetree.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace sfcpart {

Grid::Grid(SpaceParams p, std::vector<Box> cs, bool trusted)
    : params(p), cells(std::move(cs)) {
  validate_params(params);
  std::sort(cells.begin(), cells.end(), box_less);
  if (!trusted && !is_grid(params, cells))
    throw std::invalid_argument("Grid: cell set is not a grid");
}

int Grid::depth() const {
  int m = 0;
  for (const Box& b : cells) m = std::max(m, b.depth);
  return m;
}

BoxSet::BoxSet(const std::vector<Box>& boxes) {
  keys_.reserve(boxes.size() * 2);
  for (const Box& b : boxes) keys_.insert(box_key(b));
}

int BoxSet::covering_depth(const Box& b) const {
  Box cur = b;
  while (true) {
    if (contains(cur)) return cur.depth;
    if (cur.depth == 0) return -1;
    cur = parent(cur);
  }
}

Grid unit_grid(const SpaceParams& p) {
  validate_params(p);
  return Grid(p, {unit_box(p)}, true);
}

Grid subdivide(const Grid& g, const Box& x) {
  auto it = std::lower_bound(g.cells.begin(), g.cells.end(), x, box_less);
  if (it == g.cells.end() || !(*it == x))
    throw std::invalid_argument("subdivide: box is not a cell of the grid");
  std::vector<Box> cells;
  cells.reserve(g.cells.size() + (1 << g.params.d));
  for (const Box& b : g.cells)
    if (!(b == x)) cells.push_back(b);
  for (Box& c : children(x)) cells.push_back(std::move(c));
  return Grid(g.params, std::move(cells), true);
}

Rat coverage(const SpaceParams& p, const std::vector<Box>& cells) {
  if (cells.empty()) return Rat(0);
  int m = 0;
  for (const Box& b : cells) m = std::max(m, b.depth);
  Int total = 0;  // in units of k^{-m*d}
  for (const Box& b : cells)
    total += ipow(p.k, static_cast<long>(m - b.depth) * p.d);
  Rat r(total, ipow(p.k, static_cast<long>(m) * p.d));
  r.canonicalize();
  return r;
}

bool is_grid(const SpaceParams& p, const std::vector<Box>& cells) {
  if (cells.empty()) return false;
  BoxSet set(cells);
  if (set.size() != cells.size()) return false;  // duplicates
  for (const Box& b : cells) {
    if (b.params != p) return false;
    if (b.depth > 0) {
      Box cur = parent(b);
      while (true) {
        if (set.contains(cur)) return false;  // containment
        if (cur.depth == 0) break;
        cur = parent(cur);
      }
    }
  }
  return coverage(p, cells) == 1;
}

Grid minimal_grid(const SpaceParams& p, const std::vector<Box>& x) {
  if (x.empty()) throw std::invalid_argument("minimal_grid: empty box set");
  // Boxes that strictly contain an element of X = strict ancestors of X.
  BoxSet splitters;
  for (const Box& b : x) {
    Box cur = b;
    while (cur.depth > 0) {
      cur = parent(cur);
      if (splitters.contains(cur)) break;
      splitters.insert(cur);
    }
  }
  std::vector<Box> cells;
  std::function<void(const Box&)> walk = [&](const Box& b) {
    if (splitters.contains(b)) {
      for (const Box& c : children(b)) walk(c);
    } else {
      cells.push_back(b);
    }
  };
  walk(unit_box(p));
  return Grid(p, std::move(cells), true);
}

Grid meet(const Grid& g, const Grid& h) {
  if (g.params != h.params)
    throw std::invalid_argument("meet: mismatched params");
  BoxSet gcells(g.cells), hcells(h.cells);
  BoxSet ginner, hinner;  // strict ancestors of cells
  for (const Box& b : nodes(g))
    if (!gcells.contains(b)) ginner.insert(b);
  for (const Box& b : nodes(h))
    if (!hcells.contains(b)) hinner.insert(b);
  std::vector<Box> cells;
  std::function<void(const Box&)> walk = [&](const Box& b) {
    if (ginner.contains(b) || hinner.contains(b)) {
      for (const Box& c : children(b)) walk(c);
    } else {
      cells.push_back(b);
    }
  };
  walk(unit_box(g.params));
  return Grid(g.params, std::move(cells), true);
}

bool refines(const Grid& g, const Grid& h) {
  if (g.params != h.params)
    throw std::invalid_argument("refines: mismatched params");
  BoxSet hs(h.cells);
  for (const Box& b : g.cells)
    if (hs.covering_depth(b) < 0) return false;
  return true;
}

std::vector<Box> nodes(const Grid& g) {
  BoxSet seen;
  std::vector<Box> out;
  for (const Box& b : g.cells) {
    Box cur = b;
    while (true) {
      if (seen.contains(cur)) break;
      seen.insert(cur);
      out.push_back(cur);
      if (cur.depth == 0) break;
      cur = parent(cur);
    }
  }
  std::sort(out.begin(), out.end(), box_less);
  return out;
}

Rat node_count_bound(const Grid& g) {
  Rat kd = kpow(g.params.k, -g.params.d);
  Rat r = Rat(static_cast<long>(g.cells.size())) / (1 - kd);
  r.canonicalize();
  return r;
}

std::vector<Box> restrict_to(const Grid& g, const std::vector<Box>& q) {
  BoxSet qset(q);
  std::vector<Box> out;
  for (const Box& b : g.cells)
    if (qset.covering_depth(b) >= 0) out.push_back(b);
  if (coverage(g.params, out) != coverage(g.params, q))
    throw std::invalid_argument(
        "restrict: content is not a union of grid cells");
  return out;
}

Grid random_grid(const SpaceParams& p, int subdivisions, int max_depth,
                 uint64_t seed) {
  std::mt19937_64 rng(seed);
  Grid g = unit_grid(p);
  for (int t = 0; t < subdivisions; ++t) {
    std::vector<size_t> eligible;
    for (size_t i = 0; i < g.cells.size(); ++i)
      if (g.cells[i].depth < max_depth) eligible.push_back(i);
    if (eligible.empty()) break;
    size_t pick = eligible[rng() % eligible.size()];
    g = subdivide(g, g.cells[pick]);
  }
  return g;
}

using json = nlohmann::ordered_json;

static json int_to_json(const Int& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

static Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return Int(j.get<std::string>());
  throw std::invalid_argument("expected integer or decimal string");
}

std::string grid_to_json(const Grid& g) {
  json j;
  j["k"] = g.params.k;
  j["d"] = g.params.d;
  json cells = json::array();
  for (const Box& b : g.cells) {
    json c;
    c["l"] = b.depth;
    json x = json::array();
    for (const Int& v : b.coords) x.push_back(int_to_json(v));
    c["x"] = x;
    cells.push_back(c);
  }
  j["cells"] = cells;
  return j.dump();
}

Grid grid_from_json(const std::string& text) {
  json j = json::parse(text);
  SpaceParams p;
  p.k = j.at("k").get<int>();
  p.d = j.at("d").get<int>();
  validate_params(p);
  std::vector<Box> cells;
  for (const auto& c : j.at("cells")) {
    int l = c.at("l").get<int>();
    std::vector<Int> coords;
    for (const auto& v : c.at("x")) coords.push_back(int_from_json(v));
    cells.emplace_back(p, l, std::move(coords));
  }
  return Grid(p, std::move(cells));
}

}  // namespace sfcpart
