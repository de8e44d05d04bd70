#include "sfcpart/partition.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace sfcpart {

Rat FaceSet::measure() const {
  Rat total(0);
  for (const Subcube& s : faces) {
    const int e = s.params.d - codim;  // face dimension
    if (codim == s.params.d) {
      total += 1;
    } else {
      total += kpow(s.params.k, -static_cast<long>(s.depth) * e);
    }
  }
  total.canonicalize();
  return total;
}

namespace {

// fixed-plane positions in [0, k^depth] / free coordinates, per axis
struct FacePos {
  int depth;
  std::vector<Int> pos;
  uint32_t fixed;
};

FacePos face_positions(const Subcube& s) {
  FacePos fp;
  fp.depth = s.depth;
  fp.fixed = s.fixed_low | s.fixed_high;
  fp.pos.resize(s.params.d);
  for (int i = 0; i < s.params.d; ++i)
    fp.pos[i] = s.axis_fixed(i) ? s.plane_position(i) : s.coords[i];
  return fp;
}

// One depth up; false when a fixed plane is not representable there.
bool coarsen(const SpaceParams& p, FacePos& fp) {
  if (fp.depth == 0) return false;
  for (int i = 0; i < p.d; ++i)
    if (((fp.fixed >> i) & 1u) && fp.pos[i] % p.k != 0) return false;
  for (int i = 0; i < p.d; ++i) fp.pos[i] /= p.k;
  fp.depth -= 1;
  return true;
}

Subcube from_positions(const SpaceParams& p, const FacePos& fp) {
  Subcube s;
  s.params = p;
  s.depth = fp.depth;
  s.coords.resize(p.d);
  s.fixed_low = 0;
  s.fixed_high = 0;
  Int top = ipow(p.k, fp.depth);
  for (int i = 0; i < p.d; ++i) {
    if ((fp.fixed >> i) & 1u) {
      if (fp.pos[i] < top) {
        s.coords[i] = fp.pos[i];
        s.fixed_low |= 1u << i;
      } else {
        s.coords[i] = fp.pos[i] - 1;
        s.fixed_high |= 1u << i;
      }
    } else {
      s.coords[i] = fp.pos[i];
    }
  }
  return s;
}

// All codim-c faces of the grid, flagged minimal when no strictly finer face
// of the grid lies inside them.
struct FaceTable {
  std::vector<Subcube> faces;
  std::vector<bool> minimal;
};

FaceTable collect_faces(const Grid& g, int c) {
  FaceTable t;
  std::unordered_map<std::string, size_t> index;
  for (const Box& cell : g.cells) {
    for (Subcube& s : subcubes(cell, c)) {
      std::string key = subcube_key(s);
      if (index.emplace(std::move(key), t.faces.size()).second)
        t.faces.push_back(std::move(s));
    }
  }
  t.minimal.assign(t.faces.size(), true);
  if (c == g.params.d || c == 0) return t;  // points / cells never nest
  for (const Subcube& s : t.faces) {
    FacePos fp = face_positions(s);
    while (coarsen(g.params, fp)) {
      Subcube anc = from_positions(g.params, fp);
      auto it = index.find(subcube_key(anc));
      if (it != index.end()) t.minimal[it->second] = false;
    }
  }
  return t;
}

// Unique cell of G covering the orthant box touching the face. Ancestor walk
// when the box sits at or under a cell; corner-chain descent (full
// codimension only) when it is subdivided.
size_t resolve_cell(const Grid& g, const BoxSet& cells, const BoxSet& internals,
                    Box b, const FacePos& fp) {
  while (true) {
    if (cells.contains(b)) break;
    if (internals.contains(b)) {
      // subdivided: descend the corner chain
      if (__builtin_popcount(fp.fixed) != g.params.d)
        throw std::logic_error("owner descent on a face with free axes");
      while (!cells.contains(b)) {
        Int scale = ipow(g.params.k, b.depth - fp.depth);
        std::vector<Int> cc(g.params.d);
        for (int i = 0; i < g.params.d; ++i) {
          Int plane = fp.pos[i] * scale;
          if (plane == b.coords[i]) {
            cc[i] = b.coords[i] * g.params.k;  // vertex at the low corner
          } else {
            cc[i] = b.coords[i] * g.params.k + (g.params.k - 1);
          }
        }
        b = Box(g.params, b.depth + 1, std::move(cc));
      }
      break;
    }
    if (b.depth == 0)
      throw std::logic_error("resolve_cell: box outside the grid structure");
    b = parent(b);
  }
  auto it = std::lower_bound(g.cells.begin(), g.cells.end(), b, box_less);
  return static_cast<size_t>(it - g.cells.begin());
}

struct BoundaryScratch {
  BoxSet cells;
  BoxSet internals;
  std::unordered_map<std::string, uint32_t> x_index;
};

BoundaryScratch make_scratch(const std::vector<Box>& x, const Grid& g) {
  BoundaryScratch sc;
  sc.cells = BoxSet(g.cells);
  for (const Box& b : nodes(g))
    if (!sc.cells.contains(b)) sc.internals.insert(b);
  sc.x_index.reserve(x.size() * 2);
  for (uint32_t i = 0; i < x.size(); ++i) {
    if (!sc.cells.contains(x[i]))
      throw std::invalid_argument("boundary: X is not a subset of grid cells");
    sc.x_index.emplace(box_key(x[i]), i);
  }
  return sc;
}

}  // namespace

BoundaryAttribution boundary_with_owners(const std::vector<Box>& x,
                                         const Grid& g, int c) {
  const int d = g.params.d;
  if (c < 0 || c > d) throw std::invalid_argument("boundary: c out of [0, d]");
  if (x.empty()) throw std::invalid_argument("boundary: empty cell subset");
  BoundaryScratch sc = make_scratch(x, g);
  FaceTable table = collect_faces(g, c);

  BoundaryAttribution out;
  out.faces.codim = c;
  std::vector<size_t> order(table.faces.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return subcube_less(table.faces[a], table.faces[b]);
  });

  std::vector<size_t> owner_cells;
  for (size_t fi : order) {
    if (!table.minimal[fi]) continue;
    const Subcube& s = table.faces[fi];
    FacePos fp = face_positions(s);
    Int top = ipow(g.params.k, fp.depth);
    owner_cells.clear();
    const int nfixed = __builtin_popcount(fp.fixed);
    for (uint32_t combo = 0; combo < (1u << nfixed); ++combo) {
      std::vector<Int> bc(d);
      bool in_domain = true;
      int bit = 0;
      for (int i = 0; i < d; ++i) {
        if ((fp.fixed >> i) & 1u) {
          bool positive = (combo >> bit) & 1u;
          ++bit;
          Int coord = positive ? fp.pos[i] : fp.pos[i] - 1;
          if (coord < 0 || coord >= top) {
            in_domain = false;
            break;
          }
          bc[i] = coord;
        } else {
          bc[i] = fp.pos[i];
        }
      }
      if (!in_domain) continue;
      size_t idx = resolve_cell(g, sc.cells, sc.internals,
                                Box(g.params, fp.depth, std::move(bc)), fp);
      if (std::find(owner_cells.begin(), owner_cells.end(), idx) ==
          owner_cells.end())
        owner_cells.push_back(idx);
    }
    // keep the face iff it lies in exactly one cell of X, on its skeleton
    uint32_t in_x = 0;
    uint32_t x_owner = 0;
    for (size_t idx : owner_cells) {
      auto it = sc.x_index.find(box_key(g.cells[idx]));
      if (it != sc.x_index.end()) {
        ++in_x;
        x_owner = it->second;
      }
    }
    if (in_x != 1) continue;
    if (!subcube_on_skeleton(s, x[x_owner])) continue;
    out.faces.faces.push_back(s);
    out.owner.push_back(x_owner);
  }
  return out;
}

FaceSet boundary(const std::vector<Box>& x, const Grid& g, int c) {
  return boundary_with_owners(x, g, c).faces;
}

FaceSet boundary_intrinsic(const std::vector<Box>& x, int c) {
  if (x.empty()) throw std::invalid_argument("boundary: empty cell subset");
  Grid g = minimal_grid(x.front().params, x);
  return boundary(x, g, c);
}

std::vector<int> cell_classes(const std::vector<Box>& x, const Grid& g) {
  std::vector<int> cls(x.size(), 0);
  for (int c = 1; c <= g.params.d; ++c) {
    BoundaryAttribution attr = boundary_with_owners(x, g, c);
    for (uint32_t owner : attr.owner) cls[owner] = std::max(cls[owner], c);
  }
  return cls;
}

int class_of(const Box& cell, const std::vector<Box>& x, const Grid& g) {
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] == cell) return cell_classes(x, g)[i];
  }
  throw std::invalid_argument("class_of: cell not in X");
}

Int ds(const std::vector<Box>& x, const Grid& g) {
  // whole-grid fast path: only domain-boundary facets survive
  if (x.size() == g.cells.size() && x == g.cells) {
    std::unordered_map<std::string, size_t> index;
    std::vector<Subcube> faces;
    std::vector<bool> minimal;
    for (const Box& cell : g.cells) {
      Int top = ipow(g.params.k, cell.depth);
      for (int i = 0; i < g.params.d; ++i) {
        for (int side = 0; side < 2; ++side) {
          if (side == 0 && cell.coords[i] != 0) continue;
          if (side == 1 && cell.coords[i] != top - 1) continue;
          Subcube s = make_subcube(cell, side == 0 ? (1u << i) : 0,
                                   side == 1 ? (1u << i) : 0);
          std::string key = subcube_key(s);
          if (index.emplace(std::move(key), faces.size()).second) {
            faces.push_back(std::move(s));
            minimal.push_back(true);
          }
        }
      }
    }
    for (const Subcube& s : faces) {
      FacePos fp = face_positions(s);
      while (coarsen(g.params, fp)) {
        auto it = index.find(subcube_key(from_positions(g.params, fp)));
        if (it != index.end()) minimal[it->second] = false;
      }
    }
    long count = 0;
    for (bool m : minimal) count += m ? 1 : 0;
    return Int(count);
  }
  return Int(static_cast<long>(boundary(x, g, 1).size()));
}

Int ds_intrinsic(const std::vector<Box>& x) {
  if (x.empty()) throw std::invalid_argument("ds: empty cell subset");
  Grid g = minimal_grid(x.front().params, x);
  return ds(x, g);
}

std::vector<Box> shape(const SpaceParams& p, std::vector<Box> x) {
  if (x.empty()) throw std::invalid_argument("shape: empty box set");
  // drop boxes contained in others
  {
    BoxSet set(x);
    std::vector<Box> keep;
    for (const Box& b : x) {
      bool covered = false;
      Box cur = b;
      while (cur.depth > 0) {
        cur = parent(cur);
        if (set.contains(cur)) {
          covered = true;
          break;
        }
      }
      if (!covered) keep.push_back(b);
    }
    x = std::move(keep);
  }
  // merge complete sibling sets, deepest first
  size_t kd = 1;
  for (int i = 0; i < p.d; ++i) kd *= static_cast<size_t>(p.k);
  std::sort(x.begin(), x.end(), box_less);
  while (true) {
    bool merged = false;
    std::unordered_map<std::string, std::vector<size_t>> by_parent;
    int deepest = 0;
    for (const Box& b : x) deepest = std::max(deepest, b.depth);
    if (deepest == 0) break;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].depth == deepest)
        by_parent[box_key(parent(x[i]))].push_back(i);
    std::vector<bool> drop(x.size(), false);
    std::vector<Box> add;
    for (auto& [key, idxs] : by_parent) {
      if (idxs.size() == kd) {
        for (size_t i : idxs) drop[i] = true;
        add.push_back(parent(x[idxs[0]]));
        merged = true;
      }
    }
    if (!merged) {
      // nothing mergeable at the deepest level: deepest cells are final
      std::vector<Box> final_cells, rest;
      for (size_t i = 0; i < x.size(); ++i)
        (x[i].depth == deepest ? final_cells : rest).push_back(x[i]);
      if (rest.empty()) break;
      std::vector<Box> shallower = shape(p, rest);
      for (Box& b : shallower) final_cells.push_back(std::move(b));
      x = std::move(final_cells);
      break;
    }
    std::vector<Box> next;
    for (size_t i = 0; i < x.size(); ++i)
      if (!drop[i]) next.push_back(x[i]);
    for (Box& b : add) next.push_back(std::move(b));
    x = std::move(next);
  }
  std::sort(x.begin(), x.end(), box_less);
  return x;
}

bool is_shape(const SpaceParams& p, const std::vector<Box>& q) {
  std::vector<Box> sorted = q;
  std::sort(sorted.begin(), sorted.end(), box_less);
  return shape(p, q) == sorted;
}

Partition partition_from_range(const Dsfc& order, size_t first, size_t last) {
  if (first > last || last >= order.size())
    throw std::invalid_argument("partition: bad curve range");
  Partition p;
  p.grid = order.grid;
  p.curve = order.curve;
  p.first = first;
  p.last = last;
  for (size_t pos = first; pos <= last; ++pos)
    p.cells.push_back(order.cell_at(pos));
  std::sort(p.cells.begin(), p.cells.end(), box_less);
  return p;
}

Partition partition_from_cells(const SpaceParams& p, std::vector<Box> cells,
                               std::optional<CurveSpec> curve) {
  if (cells.empty()) throw std::invalid_argument("partition: no cells");
  std::sort(cells.begin(), cells.end(), box_less);
  for (size_t i = 0; i + 1 < cells.size(); ++i)
    if (cells[i] == cells[i + 1])
      throw std::invalid_argument("partition: duplicate cells");
  Partition out;
  out.grid = minimal_grid(p, cells);
  out.cells = std::move(cells);
  // antichain comes with minimal_grid membership
  BoxSet gridcells(out.grid.cells);
  for (const Box& b : out.cells)
    if (!gridcells.contains(b))
      throw std::invalid_argument("partition: cells are not an antichain");
  if (curve) {
    Dsfc order = order_cells(*curve, out.grid);
    std::vector<uint32_t> pos = order.positions();
    BoxSet mine(out.cells);
    std::vector<uint32_t> positions;
    for (uint32_t i = 0; i < out.grid.cells.size(); ++i)
      if (mine.contains(out.grid.cells[i])) positions.push_back(pos[i]);
    std::sort(positions.begin(), positions.end());
    for (size_t i = 0; i + 1 < positions.size(); ++i)
      if (positions[i + 1] != positions[i] + 1)
        throw std::invalid_argument(
            "partition: cells are not consecutive along the curve");
    out.curve = curve;
    out.first = positions.front();
    out.last = positions.back();
  }
  return out;
}

std::map<int, long> ClassifiedView::histogram() const {
  std::map<int, long> h;
  for (int c : classes) ++h[c];
  return h;
}

Int ClassifiedView::class_sum() const {
  Int s = 0;
  for (int c : classes) s += c;
  return s;
}

namespace {

// facet side masks per cell of X: which (axis, side) pairs carry owned
// boundary facets, and how many facets each cell owns
struct FacetProfile {
  std::vector<uint32_t> low, high;
  std::vector<long> count;
};

FacetProfile facet_profile(const std::vector<Box>& x, const Grid& g) {
  FacetProfile fp;
  fp.low.assign(x.size(), 0);
  fp.high.assign(x.size(), 0);
  fp.count.assign(x.size(), 0);
  BoundaryAttribution attr = boundary_with_owners(x, g, 1);
  for (size_t i = 0; i < attr.faces.faces.size(); ++i) {
    const Subcube& s = attr.faces.faces[i];
    uint32_t owner = attr.owner[i];
    const Box& h = x[owner];
    int axis = -1;
    for (int a = 0; a < g.params.d; ++a)
      if (s.axis_fixed(a)) axis = a;
    Int scale = ipow(g.params.k, s.depth - h.depth);
    Int plane = s.plane_position(axis);
    if (plane == h.coords[axis] * scale)
      fp.low[owner] |= 1u << axis;
    else
      fp.high[owner] |= 1u << axis;
    fp.count[owner] += 1;
  }
  return fp;
}

}  // namespace

std::vector<Box> preclassify(const SpaceParams& p, const std::vector<Box>& x) {
  Grid g = minimal_grid(p, x);
  BoundaryAttribution attr = boundary_with_owners(x, g, 1);
  std::vector<Box> generators = x;
  for (size_t i = 0; i < attr.faces.faces.size(); ++i) {
    const Subcube& s = attr.faces.faces[i];
    const Box& h = x[attr.owner[i]];
    int axis = -1;
    for (int a = 0; a < p.d; ++a)
      if (s.axis_fixed(a)) axis = a;
    Int scale = ipow(p.k, s.depth - h.depth);
    Int plane = s.plane_position(axis);
    std::vector<Int> coords(p.d);
    for (int a = 0; a < p.d; ++a) coords[a] = s.coords[a];
    // box inside the owner having the facet as a whole subcube
    coords[axis] = (plane == h.coords[axis] * scale) ? plane : plane - 1;
    generators.emplace_back(p, s.depth, std::move(coords));
  }
  return restrict_to(minimal_grid(p, generators), x);
}

std::vector<Box> non_classified_cells(const SpaceParams& p,
                                      const std::vector<Box>& preclassified) {
  Grid g = minimal_grid(p, preclassified);
  FacetProfile fp = facet_profile(preclassified, g);
  std::vector<Box> out;
  for (size_t i = 0; i < preclassified.size(); ++i)
    if (fp.low[i] & fp.high[i]) out.push_back(preclassified[i]);
  return out;
}

ClassifiedView classify(const SpaceParams& p, const std::vector<Box>& x) {
  ClassifiedView v;
  v.base = x;
  std::sort(v.base.begin(), v.base.end(), box_less);
  v.preclassified = preclassify(p, v.base);
  BoxSet split(non_classified_cells(p, v.preclassified));
  v.classified.reserve(v.preclassified.size());
  for (const Box& b : v.preclassified) {
    if (split.contains(b)) {
      for (Box& c : children(b)) v.classified.push_back(std::move(c));
    } else {
      v.classified.push_back(b);
    }
  }
  std::sort(v.classified.begin(), v.classified.end(), box_less);
  Grid g = minimal_grid(p, v.classified);
  v.classes = cell_classes(v.classified, g);
  return v;
}

std::map<std::pair<int, int>, long> class_table(const SpaceParams& p,
                                                const std::vector<Box>& q) {
  ClassifiedView v = classify(p, q);
  std::map<std::pair<int, int>, long> a;
  for (size_t i = 0; i < v.classified.size(); ++i)
    ++a[{v.classified[i].depth, v.classes[i]}];
  return a;
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

static json cells_to_json(const std::vector<Box>& cells) {
  json arr = json::array();
  for (const Box& b : cells) {
    json c;
    c["l"] = b.depth;
    json xx = json::array();
    for (const Int& v : b.coords) xx.push_back(int_to_json(v));
    c["x"] = xx;
    arr.push_back(c);
  }
  return arr;
}

static std::vector<Box> cells_from_json(const SpaceParams& p, const json& arr) {
  std::vector<Box> cells;
  for (const auto& c : arr) {
    int l = c.at("l").get<int>();
    std::vector<Int> coords;
    for (const auto& v : c.at("x")) coords.push_back(int_from_json(v));
    cells.emplace_back(p, l, std::move(coords));
  }
  return cells;
}

std::string partition_to_json(const Partition& p) {
  json j;
  j["k"] = p.grid.params.k;
  j["d"] = p.grid.params.d;
  if (p.curve) {
    j["cells"] = cells_to_json(p.grid.cells);
    j["curve"] = family_name(p.curve->family);
    j["range"] = json::array({p.first + 1, p.last + 1});  // 1-based
  } else {
    j["cells"] = cells_to_json(p.cells);
  }
  return j.dump();
}

Partition partition_from_json(const std::string& text) {
  json j = json::parse(text);
  SpaceParams sp;
  sp.k = j.at("k").get<int>();
  sp.d = j.at("d").get<int>();
  validate_params(sp);
  std::vector<Box> cells = cells_from_json(sp, j.at("cells"));
  if (j.contains("curve")) {
    CurveSpec c = make_curve(j.at("curve").get<std::string>(), sp);
    Grid g(sp, std::move(cells));
    Dsfc order = order_cells(c, g);
    auto range = j.at("range");
    size_t i = range.at(0).get<size_t>(), jj = range.at(1).get<size_t>();
    if (i < 1 || jj < i || jj > order.size())
      throw std::invalid_argument("partition: bad range");
    return partition_from_range(order, i - 1, jj - 1);
  }
  return partition_from_cells(sp, std::move(cells));
}

std::string classified_to_json(const SpaceParams& p, const ClassifiedView& v) {
  json j;
  j["k"] = p.k;
  j["d"] = p.d;
  j["base"] = cells_to_json(v.base);
  j["preclassified"] = cells_to_json(v.preclassified);
  json arr = json::array();
  for (size_t i = 0; i < v.classified.size(); ++i) {
    const Box& b = v.classified[i];
    json c;
    c["l"] = b.depth;
    json xx = json::array();
    for (const Int& vv : b.coords) xx.push_back(int_to_json(vv));
    c["x"] = xx;
    c["class"] = v.classes[i];
    arr.push_back(c);
  }
  j["cells"] = arr;
  json h;
  for (auto& [cls, count] : v.histogram()) h[std::to_string(cls)] = count;
  j["histogram"] = h;
  return j.dump();
}

}  // namespace sfcpart
