#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "sfcpart/partition.hpp"

namespace {

std::string bin() {
  const char* env = std::getenv("SFCPART_BIN");
  REQUIRE(env != nullptr);
  return env;
}

int run(const std::string& args, const std::string& stdout_to = "") {
  std::string cmd = bin() + " " + args;
  if (!stdout_to.empty()) cmd += " > " + stdout_to;
  cmd += " 2> /dev/null";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen + measure reproduces the corner-grid numbers") {
  REQUIRE(run("gen --family class-regular --k 2 --d 2 --c 2 --r 2 -M 4 "
              "--out /tmp/sfcpart_t1.json") == 0);
  REQUIRE(run("measure --in /tmp/sfcpart_t1.json", "/tmp/sfcpart_t1_m.json") ==
          0);
  std::string m = read_file("/tmp/sfcpart_t1_m.json");
  CHECK(m.find("\"dv\":13") != std::string::npos);
  CHECK(m.find("\"ds\":14") != std::string::npos);
}

TEST_CASE("classify emits the example fixture histogram") {
  REQUIRE(run(std::string("classify --in ") + FIXTURES_DIR +
              "/example_p.json --out /tmp/sfcpart_t2.json") == 0);
  std::string out = read_file("/tmp/sfcpart_t2.json");
  CHECK(out.find("\"histogram\":{\"0\":1,\"1\":8,\"2\":6}") !=
        std::string::npos);
}

TEST_CASE("validate: good grid exits 0, corrupted grid exits 2") {
  REQUIRE(run("gen --family regular --k 2 --d 2 -M 2 --out /tmp/sfcpart_t3.json") == 0);
  CHECK(run("validate --in /tmp/sfcpart_t3.json") == 0);
  // drop one cell
  std::string text = read_file("/tmp/sfcpart_t3.json");
  auto pos = text.rfind(",{\"l\":2");
  REQUIRE(pos != std::string::npos);
  auto end = text.find('}', pos);
  text.erase(pos, end - pos + 1);
  std::ofstream("/tmp/sfcpart_t3_bad.json") << text;
  CHECK(run("validate --in /tmp/sfcpart_t3_bad.json",
            "/tmp/sfcpart_t3_msg.txt") == 2);
  CHECK(read_file("/tmp/sfcpart_t3_msg.txt").find("coverage 15/16") !=
        std::string::npos);
}

TEST_CASE("identical flags give byte-identical outputs") {
  REQUIRE(run("locality --curve hilbert2d -M 5 --samples 500 --seed 7",
              "/tmp/sfcpart_t4a.txt") == 0);
  REQUIRE(run("locality --curve hilbert2d -M 5 --samples 500 --seed 7",
              "/tmp/sfcpart_t4b.txt") == 0);
  CHECK(read_file("/tmp/sfcpart_t4a.txt") == read_file("/tmp/sfcpart_t4b.txt"));
  REQUIRE(run("staircase --curve hilbert2d --k 2 --d 2 -M 6 --points 16",
              "/tmp/sfcpart_t4c.txt") == 0);
  REQUIRE(run("staircase --curve hilbert2d --k 2 --d 2 -M 6 --points 16",
              "/tmp/sfcpart_t4d.txt") == 0);
  CHECK(read_file("/tmp/sfcpart_t4c.txt") == read_file("/tmp/sfcpart_t4d.txt"));
}

TEST_CASE("emitted grid JSON re-validates and round-trips byte-stably") {
  REQUIRE(run("gen --family cantor --k 3 --d 2 -M 3 --out /tmp/sfcpart_t5.json") == 0);
  std::string text = read_file("/tmp/sfcpart_t5.json");
  sfcpart::Grid g = sfcpart::grid_from_json(text);
  CHECK(sfcpart::grid_to_json(g) == text);
  CHECK(run("validate --in /tmp/sfcpart_t5.json") == 0);
}

TEST_CASE("usage errors exit 1, malformed data exits 2") {
  CHECK(run("gen --family unknown-family -M 2") == 1);
  CHECK(run("nonsense") == 1);
  std::ofstream("/tmp/sfcpart_t6.json") << "{not json";
  CHECK(run("measure --in /tmp/sfcpart_t6.json") == 2);
  CHECK(run("table --k 3 --d 2 --max-M 2") == 1);
}

TEST_CASE("gen hc emits the shape-class-regular partition") {
  REQUIRE(run("gen --family hc --k 2 --d 2 --c 1 -M 3 "
              "--out /tmp/sfcpart_t10.json") == 0);
  sfcpart::Partition p =
      sfcpart::partition_from_json(read_file("/tmp/sfcpart_t10.json"));
  CHECK(p.cells.size() == 52);  // 12*2^M - 12M - 8 at M=3
}

TEST_CASE("tower fixture classifies to the linear family values") {
  REQUIRE(run(std::string("classify --in ") + FIXTURES_DIR +
              "/tower_m5.json --out /tmp/sfcpart_t9.json") == 0);
  std::string out = read_file("/tmp/sfcpart_t9.json");
  // classify(tower(5)) has 4*6-4 = 20 cells and surface 5*6-2 = 28
  sfcpart::Partition p = sfcpart::partition_from_json(
      read_file(std::string(FIXTURES_DIR) + "/tower_m5.json"));
  sfcpart::ClassifiedView v =
      sfcpart::classify(p.grid.params, p.cells);
  CHECK(v.classified.size() == 20);
  CHECK(v.class_sum() == 28);
  CHECK(out.find("\"histogram\"") != std::string::npos);
}

TEST_CASE("befill and mu2-shape generators emit loadable partitions") {
  REQUIRE(run("gen --family befill --k 2 --d 2 -M 3 --volume 13 "
              "--curve hilbert2d --out /tmp/sfcpart_t7.json") == 0);
  sfcpart::Partition p =
      sfcpart::partition_from_json(read_file("/tmp/sfcpart_t7.json"));
  CHECK(p.cells.size() == 13);
  REQUIRE(run("gen --family mu2-shape --k 2 --d 2 --n 6 "
              "--curve hilbert2d --out /tmp/sfcpart_t8.json") == 0);
  sfcpart::Partition q =
      sfcpart::partition_from_json(read_file("/tmp/sfcpart_t8.json"));
  CHECK(q.cells.size() == 3);
}
