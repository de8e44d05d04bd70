#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "sfcpart/analysis.hpp"
#include "sfcpart/generators.hpp"
#include "sfcpart/metrics.hpp"

using namespace sfcpart;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out.good()) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string cells_json(const SpaceParams& p, const std::vector<Box>& cells) {
  Partition part;
  part.grid = minimal_grid(p, cells);
  part.cells = cells;
  return partition_to_json(part);
}

struct GenOptions {
  std::string family;
  int k = 2, d = 2, m = 1, c = 0, r = 0, n = 2;
  std::string volume = "";
  std::string curve = "hilbert2d";
  std::string out;
};

int run_gen(const GenOptions& o) {
  SpaceParams p{o.k, o.d};
  validate_params(p);
  if (o.family == "regular") {
    write_output(o.out, grid_to_json(class_regular({p, 0, 0, o.m})));
  } else if (o.family == "class-regular") {
    write_output(o.out, grid_to_json(class_regular({p, o.c, o.r, o.m})));
  } else if (o.family == "cantor") {
    if (o.k != 3 || o.d != 2)
      throw std::invalid_argument("cantor requires k=3, d=2");
    write_output(o.out, grid_to_json(cantor_grid(o.m)));
  } else if (o.family == "hc") {
    std::vector<Box> q = {unit_box(p)};
    write_output(o.out, cells_json(p, shape_class_regular(p, q, o.m, o.c)));
  } else if (o.family == "befill") {
    std::vector<Box> q = {unit_box(p)};
    BefillSpec spec{q, Int(o.volume), o.m, make_curve(o.curve, p)};
    write_output(o.out, cells_json(p, befill(p, spec)));
  } else if (o.family == "mu2-shape") {
    CurveSpec curve = make_curve(o.curve, p);
    write_output(o.out, cells_json(p, mu2_shape(curve, o.n)));
  } else if (o.family == "tower") {
    write_output(o.out, cells_json(p, tower(p, o.m)));
  } else {
    std::cerr << "unknown family: " << o.family << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spacetree grids, space-filling-curve partitions and their "
               "surface-to-volume diagnostics"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* cgen = app.add_subcommand("gen", "generate a grid or partition");
  cgen->add_option("--family", gen.family,
                   "regular | class-regular | cantor | hc | befill | "
                   "mu2-shape | tower")
      ->required();
  cgen->add_option("--k", gen.k);
  cgen->add_option("--d", gen.d);
  cgen->add_option("-M,--depth", gen.m);
  cgen->add_option("--c", gen.c);
  cgen->add_option("--r", gen.r);
  cgen->add_option("--n", gen.n);
  cgen->add_option("--volume", gen.volume);
  cgen->add_option("--curve", gen.curve);
  cgen->add_option("--out", gen.out);

  std::string in_path, partition_path, out_path;
  int codim = -1;
  auto* cmeasure = app.add_subcommand("measure", "measure a grid or partition");
  cmeasure->add_option("--in", in_path, "grid JSON")->required();
  cmeasure->add_option("--partition", partition_path, "partition JSON");
  cmeasure->add_option("--c", codim, "also report the codim-c boundary measure");
  cmeasure->add_option("--out", out_path);

  std::string cls_in, cls_out;
  auto* cclassify = app.add_subcommand("classify", "pre-classify and classify");
  cclassify->add_option("--in", cls_in, "partition JSON")->required();
  cclassify->add_option("--out", cls_out);

  int table_k = 2, table_d = 2, table_max_m = 10;
  std::string table_out;
  auto* ctable = app.add_subcommand("table", "recursive-grid family report");
  ctable->add_option("--k", table_k);
  ctable->add_option("--d", table_d);
  ctable->add_option("--max-M", table_max_m);
  ctable->add_option("--out", table_out);

  std::string st_curve = "hilbert2d";
  int st_k = 2, st_d = 2, st_m = 8, st_points = 48;
  std::string st_out;
  auto* cstair = app.add_subcommand("staircase", "worst-case ratio profile");
  cstair->add_option("--curve", st_curve);
  cstair->add_option("--k", st_k);
  cstair->add_option("--d", st_d);
  cstair->add_option("-M,--depth", st_m);
  cstair->add_option("--points", st_points);
  cstair->add_option("--out", st_out);

  std::string mu_curve = "hilbert2d";
  int mu_c = 1, mu_depth_bound = 3, mu_m = 12;
  auto* cmu = app.add_subcommand("search-mu", "extremal shape search");
  cmu->add_option("--curve", mu_curve);
  cmu->add_option("--c", mu_c)->required();
  cmu->add_option("--depth-bound", mu_depth_bound);
  cmu->add_option("-M,--depth", mu_m);

  std::string loc_curve = "hilbert2d";
  int loc_m = 8;
  long loc_samples = 100000;
  uint64_t loc_seed = 0;
  auto* cloc = app.add_subcommand("locality", "finite-scale Hoelder check");
  cloc->add_option("--curve", loc_curve);
  cloc->add_option("-M,--depth", loc_m);
  cloc->add_option("--samples", loc_samples);
  cloc->add_option("--seed", loc_seed)->required();

  std::string val_in;
  auto* cval = app.add_subcommand("validate", "grid invariants");
  cval->add_option("--in", val_in)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cgen->parsed()) return run_gen(gen);

    if (cmeasure->parsed()) {
      Grid g = grid_from_json(read_file(in_path));
      std::vector<Box> x = g.cells;
      if (!partition_path.empty()) {
        Partition part = partition_from_json(read_file(partition_path));
        x = part.cells;
      }
      MeasureReport r = measure(x, g);
      std::string body = measure_to_json(r);
      if (codim >= 0) {
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(body);
        j["cv_boundary"] = nlohmann::ordered_json(
            {{"c", codim}, {"value", to_frac_string(cv_boundary(x, codim))}});
        body = j.dump();
      }
      write_output(out_path, body);
      return kExitOk;
    }

    if (cclassify->parsed()) {
      Partition part = partition_from_json(read_file(cls_in));
      ClassifiedView v = classify(part.grid.params, part.cells);
      write_output(cls_out, classified_to_json(part.grid.params, v));
      std::ostringstream hist;
      hist << "preclassified=" << v.preclassified.size()
           << " classified=" << v.classified.size() << " histogram=";
      for (auto& [c, n] : v.histogram()) hist << "[" << c << "]=" << n << " ";
      hist << "ds=" << v.class_sum().get_str();
      std::cerr << hist.str() << "\n";
      return kExitOk;
    }

    if (ctable->parsed()) {
      if (table_k != 2 || table_d != 2) {
        std::cerr << "table: the family report is pinned to k=2, d=2 "
                     "(plus the k=3 Cantor row)\n";
        return kExitUsage;
      }
      auto rows = reproduce_table(table_max_m);
      write_output(table_out, table_to_csv(rows));
      for (const TableRow& r : rows) {
        if (!r.exact_match) {
          std::cerr << "mismatch at " << r.name << " M=" << r.m << "\n";
          return kExitInvariant;
        }
      }
      return kExitOk;
    }

    if (cstair->parsed()) {
      SpaceParams p{st_k, st_d};
      make_curve(st_curve, p);  // validates the pairing
      auto rows = staircase_sweep(p, {unit_box(p)}, st_m, st_points);
      write_output(st_out, staircase_to_csv(rows));
      return kExitOk;
    }

    if (cmu->parsed()) {
      SpaceParams p{2, 2};
      if (mu_curve == "peano") p = SpaceParams{3, 2};
      CurveSpec curve = make_curve(mu_curve, p);
      MuEstimate est = search_mu(curve, mu_c, mu_depth_bound, mu_m);
      nlohmann::ordered_json j;
      j["c"] = est.c;
      j["best_value"] = to_frac_string(est.best_value);
      j["mu_lower"] = to_frac_string(est.mu_lower);
      j["analytic_lower"] = to_frac_string(est.analytic_lower);
      j["analytic_upper"] = to_frac_string(est.analytic_upper);
      j["shapes_seen"] = est.shapes_seen;
      Partition w;
      w.grid = minimal_grid(p, est.witness);
      w.cells = est.witness;
      j["witness"] = nlohmann::ordered_json::parse(partition_to_json(w));
      write_output("", j.dump());
      return kExitOk;
    }

    if (cloc->parsed()) {
      SpaceParams p{2, 2};
      if (loc_curve == "peano") p = SpaceParams{3, 2};
      CurveSpec curve = make_curve(loc_curve, p);
      LocalityReport rep = locality_check(curve, loc_m, loc_samples, loc_seed);
      nlohmann::ordered_json j;
      j["worst_ratio"] = to_frac_string(rep.worst_ratio);
      j["bound"] = to_frac_string(rep.bound);
      j["pairs"] = rep.pairs;
      j["within_bound"] = rep.within_bound;
      write_output("", j.dump());
      return rep.within_bound ? kExitOk : kExitInvariant;
    }

    if (cval->parsed()) {
      nlohmann::json j = nlohmann::json::parse(read_file(val_in));
      SpaceParams p{j.at("k").get<int>(), j.at("d").get<int>()};
      validate_params(p);
      std::vector<Box> cells;
      for (const auto& c : j.at("cells")) {
        std::vector<Int> coords;
        for (const auto& v : c.at("x")) {
          if (v.is_string())
            coords.emplace_back(v.get<std::string>());
          else
            coords.emplace_back(static_cast<long>(v.get<long long>()));
        }
        cells.emplace_back(p, c.at("l").get<int>(), std::move(coords));
      }
      Rat cover = coverage(p, cells);
      if (cover != 1) {
        std::cout << "invalid: coverage " << to_frac_string(cover) << "\n";
        return kExitInvariant;
      }
      if (!is_grid(p, cells)) {
        std::cout << "invalid: cells are not an antichain\n";
        return kExitInvariant;
      }
      std::cout << "ok: " << cells.size() << " cells, depth "
                << Grid(p, cells, true).depth() << "\n";
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed JSON";
    if (!in_path.empty()) std::cerr << " (" << in_path << ")";
    if (!cls_in.empty()) std::cerr << " (" << cls_in << ")";
    if (!val_in.empty()) std::cerr << " (" << val_in << ")";
    std::cerr << ": " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}
