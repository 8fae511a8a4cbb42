#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "doctest.h"
#include "rankfield/csr.hpp"
#include "rankfield/io.hpp"
#include "rankfield/model_io.hpp"

using namespace rankfield;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + RANKFIELD_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rankfield_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::size_t data_rows(const fs::path& file) {
  std::size_t rows = 0;
  for (const auto& line : split(read_file(file), '\n')) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return files;
}

nlohmann::json summary(const Run& r) {
  REQUIRE(r.status == 0);
  REQUIRE(r.out.find('\n') == r.out.size() - 1);
  return nlohmann::json::parse(r.out);
}

}  // namespace

TEST_CASE("simulate writes one file per pattern with the requested size") {
  const auto dir = scratch("simulate");
  const auto s = summary(run("simulate --process binomial --n 100 --count 1 --out " + q(dir)));
  CHECK(s["command"] == "simulate");
  CHECK(s["patterns"] == 1);
  CHECK(s.contains("seconds"));
  CHECK(data_rows(dir / "pattern_0000.csv") == 100);
  // Pattern i is the library pattern with seed base + i.
  summary(run("simulate --process strauss --n 100 --radius 0.05 --gamma 0.5 --count 300 --seed 40 "
              "--jobs 2 --out " + q(dir / "strauss")));
  for (std::size_t i = 0; i < 300; ++i) {
    const auto name = "pattern_" + std::string(i < 10 ? "000" : i < 100 ? "00" : "0") +
                      std::to_string(i) + ".csv";
    REQUIRE(data_rows(dir / "strauss" / name) == 100);
  }
  CHECK(read_points(dir / "strauss" / "pattern_0017.csv") ==
        gen_strauss(0.05, 0.5, 100, 40 + 17));
}

TEST_CASE("reruns are byte-identical and replayable from run.json") {
  const auto dir = scratch("rerun");
  const std::string args = "simulate --process matern --n 100 --count 4 --seed 5 --out " + q(dir / "a");
  summary(run(args));
  const auto first = snapshot(dir / "a");
  fs::remove_all(dir / "a");
  summary(run(args));
  CHECK(snapshot(dir / "a") == first);
  // The recorded configuration alone reproduces the run.
  fs::copy_file(dir / "a" / "run.json", dir / "run.json");
  fs::remove_all(dir / "a");
  summary(run("simulate --config " + q(dir / "run.json")));
  CHECK(snapshot(dir / "a") == first);
}

TEST_CASE("thread count does not change outputs") {
  const auto dir = scratch("jobs");
  summary(run("simulate --process binomial --n 60 --count 6 --seed 2 --out " + q(dir / "p")));
  summary(run("persist " + q(dir / "p") + "/pattern_*.csv --jobs 1 --out " + q(dir / "one")));
  summary(run("persist " + q(dir / "p") + "/pattern_*.csv --jobs 3 --out " + q(dir / "three")));
  CHECK(snapshot(dir / "one") == snapshot(dir / "three"));
}

TEST_CASE("persist on the equilateral triangle") {
  const auto dir = scratch("triangle");
  write_file_atomic(dir / "tri.csv", "-1,0\n1,0\n0,1.7320508075688772\n");
  const auto s = summary(run("persist " + q(dir / "tri.csv") + " --out " + q(dir)));
  CHECK(s["outputs"][0] == (dir / "tri.diagram.csv").string());
  CHECK(read_file(dir / "tri.diagram.csv").find("\n1,1.0,1.1547") != std::string::npos);
}

TEST_CASE("rank on an empty diagram is identically zero") {
  const auto dir = scratch("empty");
  write_file_atomic(dir / "none.csv", "dim,birth,death\n");
  summary(run("rank " + q(dir / "none.csv") + " --dim 1 --grid 0,0.5,20 --out " + q(dir)));
  const auto f = read_grid_function(dir / "none.rank1.csv");
  CHECK(f.grid == Grid(0, 0.5, 20));
  for (double v : f.values) CHECK(v == 0.0);
  CHECK(fs::exists(dir / "none.rank1.matrix"));
}

TEST_CASE("pipeline decisions match the library") {
  const auto dir = scratch("pipeline");
  const std::string grid = "--grid 0,0.5,40";
  summary(run("csr-fit --n-mean 40 --n-null 30 --dim 0,1 --seed 3 " + grid + " --out " +
              q(dir / "model")));
  summary(run("simulate --process strauss --n 100 --radius 0.05 --gamma 0.3 --count 12 --seed 900 "
              "--out " + q(dir / "sim")));
  summary(run("persist " + q(dir / "sim") + "/pattern_*.csv --out " + q(dir / "dia")));
  summary(run("rank " + q(dir / "dia") + "/*.diagram.csv --dim 0,1 " + grid + " --out " +
              q(dir / "rank")));

  CsrFitConfig cfg;
  cfg.n_mean = 40;
  cfg.n_null = 30;
  cfg.seed = 3;
  cfg.grid = Grid(0, 0.5, 40);
  const int dims[] = {0, 1};
  const auto models = fit_csr_models(cfg, dims);
  for (int k : dims) {
    const auto model_file = dir / "model" / ("csr_dim" + std::to_string(k) + ".json");
    CHECK(read_csr_model(model_file).null_distances == models[k].null_distances);
    const auto s = summary(run("csr-test --model " + q(model_file) + " " + q(dir / "rank") +
                               "/*.rank" + std::to_string(k) + ".csv --out " +
                               q(dir / ("decisions" + std::to_string(k) + ".csv"))));
    std::size_t expected_rejections = 0;
    const auto rows = split(read_file(dir / ("decisions" + std::to_string(k) + ".csv")), '\n');
    for (std::size_t i = 0; i < 12; ++i) {
      const auto direct = test_pattern(models[k], gen_strauss(0.05, 0.3, 100, 900 + i));
      expected_rejections += direct.reject;
      const auto cols = split(rows[i + 1], ',');
      CHECK(parse_double(cols[2]) == direct.distance_squared);
      CHECK(cols[4] == (direct.reject ? "1" : "0"));
    }
    CHECK(s["rejected"] == expected_rejections);
  }
}

TEST_CASE("csr-test accepts points, diagrams and rank functions alike") {
  const auto dir = scratch("formats");
  summary(run("csr-fit --n-mean 20 --n-null 10 --dim 1 --grid 0,0.5,30 --out " + q(dir)));
  summary(run("simulate --process binomial --n 80 --seed 4 --out " + q(dir)));
  summary(run("persist " + q(dir / "pattern_0000.csv") + " --out " + q(dir)));
  summary(run("rank " + q(dir / "pattern_0000.diagram.csv") + " --dim 1 --grid 0,0.5,30 --out " +
              q(dir)));
  summary(run("csr-test --model " + q(dir / "csr_dim1.json") + " " + q(dir / "pattern_0000.csv") +
              " " + q(dir / "pattern_0000.diagram.csv") + " " + q(dir / "pattern_0000.rank1.csv") +
              " --out " + q(dir / "t.csv")));
  const auto rows = split(read_file(dir / "t.csv"), '\n');
  CHECK(split(rows[1], ',')[2] == split(rows[2], ',')[2]);
  CHECK(split(rows[1], ',')[2] == split(rows[3], ',')[2]);
  // Grid mismatch between model and rank file is a contract error.
  summary(run("rank " + q(dir / "pattern_0000.diagram.csv") + " --dim 1 --grid 0,0.5,31 --out " +
              q(dir / "other")));
  CHECK(run("csr-test --model " + q(dir / "csr_dim1.json") + " " +
            q(dir / "other" / "pattern_0000.rank1.csv") + " --out " + q(dir / "u.csv"))
            .status == 1);
}

TEST_CASE("power writes the rejection table") {
  const auto dir = scratch("power");
  const auto s = summary(run("power --n-test 4 --n-mean 30 --n-null 20 --grid 0,0.5,30 --out " +
                             q(dir)));
  const auto csv = read_file(dir / "table.csv");
  const auto rows = split(csv, '\n');
  CHECK(rows[0] == "test,CSR,Strauss,Matern Cluster,Baddeley-Silverman");
  CHECK(rows[1].rfind("dim 0,", 0) == 0);
  CHECK(rows[2].rfind("dim 1,", 0) == 0);
  CHECK(split(rows[1], ',').size() == 5);
  CHECK(rows.size() == 4);  // trailing newline
  CHECK(s["rejections"].size() == 2);
  CHECK(fs::exists(dir / "table.txt"));
  CHECK(fs::exists(dir / "csr_dim0.json"));
}

TEST_CASE("mean and pca outputs") {
  const auto dir = scratch("pca");
  summary(run("simulate --process binomial --n 50 --count 5 --out " + q(dir)));
  summary(run("persist " + q(dir) + "/pattern_*.csv --out " + q(dir)));
  summary(run("rank " + q(dir) + "/*.diagram.csv --dim 0 --grid 0,0.5,25 --out " + q(dir)));
  summary(run("mean " + q(dir) + "/*.rank0.csv --out " + q(dir / "mean.csv")));
  const auto m = read_grid_function(dir / "mean.csv");
  CHECK(is_monotone(m));
  const auto s = summary(run("pca " + q(dir) + "/*.rank0.csv --components 3 --out " + q(dir / "model")));
  CHECK(s["components"] == 3);
  CHECK(read_file(dir / "model" / "scores.csv").find("\npattern_0004,") != std::string::npos);
}

TEST_CASE("subsample cuts disjoint scaled cubes") {
  const auto dir = scratch("subsample");
  std::string text = "# window 0 4 0 4 0 2\n";
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      for (int z = 0; z < 2; ++z) {
        text += std::to_string(x + 0.5) + "," + std::to_string(y + 0.5) + "," +
                std::to_string(z + 0.25) + "\n";
      }
    }
  }
  write_file_atomic(dir / "big.csv", text);
  const auto s = summary(run("subsample " + q(dir / "big.csv") +
                             " --cube 2 --count 4 --mean-radius 0.5 --out " + q(dir / "cubes")));
  CHECK(s["points"] == nlohmann::json::array({8, 8, 8, 8}));
  const auto c1 = read_points(dir / "cubes" / "cube_0001.csv");
  CHECK(c1.window().upper == std::vector<double>{4, 4, 4});
  // Cube 1 starts at x = 2; the point (2.5, 0.5, 0.25) maps to (1, 1, 0.5).
  CHECK(c1.point(0)[0] == 1.0);
  CHECK(c1.point(0)[1] == 1.0);
  CHECK(c1.point(0)[2] == 0.5);
  CHECK(run("subsample " + q(dir / "big.csv") + " --cube 2 --count 5 --out " + q(dir / "x"))
            .status == 1);
}

TEST_CASE("exit codes separate config errors from input errors") {
  const auto dir = scratch("errors");
  write_file_atomic(dir / "extra.json", R"({"process": {"kind": "binomial", "n": 5}, "out": "x", "speed": 3})");
  CHECK(run("simulate --config " + q(dir / "extra.json")).status == 2);
  write_file_atomic(dir / "wrong.json", R"({"process": {"kind": "poisson", "gamma": 0.5}, "out": "x"})");
  CHECK(run("simulate --config " + q(dir / "wrong.json")).status == 2);
  write_file_atomic(dir / "other.json", R"({"command": "rank", "out": "x"})");
  CHECK(run("simulate --config " + q(dir / "other.json")).status == 2);
  CHECK(run("rank x.csv --grid 0,0.5 --out " + q(dir)).status == 2);
  CHECK(run("rank x.csv --phi gaussian --out " + q(dir)).status == 2);
  CHECK(run("simulate --process strauss --n 10 --gamma 2 --out " + q(dir)).status == 2);
  CHECK(run("persist --seed 3 x.csv --out " + q(dir)).status == 2);
  CHECK(run("simulate --process binomial --n 5 --out " + q(dir), "RANKFIELD_LOG=chatty").status == 2);
  CHECK(run("simulate --process binomial --n 5 --out " + q(dir), "RANKFIELD_LOG=debug").status == 0);

  write_file_atomic(dir / "bad.csv", "0.1,0.2\n0.3,oops\n");
  const std::string cmd = std::string(RANKFIELD_CLI) + " persist " + q(dir / "bad.csv") +
                          " --out " + q(dir) + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[512] = {};
  const auto n = fread(buf, 1, sizeof buf - 1, pipe);
  const int raw = pclose(pipe);
  CHECK(WEXITSTATUS(raw) == 1);
  CHECK(std::string(buf, n).find("bad.csv:2:") != std::string::npos);
  CHECK(run("rank " + q(dir / "missing.csv") + " --out " + q(dir)).status == 1);
}

TEST_CASE("flags override the config file") {
  const auto dir = scratch("override");
  write_file_atomic(dir / "cfg.json", R"({"process": {"kind": "binomial", "n": 5}, "count": 2, "seed": 1, "out": ")" +
                                          (dir / "out").string() + R"("})");
  summary(run("simulate --config " + q(dir / "cfg.json") + " --n 7 --seed 11"));
  CHECK(read_points(dir / "out" / "pattern_0001.csv") == gen_binomial(7, Window::unit(2), 12));
  const auto record = nlohmann::json::parse(read_file(dir / "out" / "run.json"));
  CHECK(record["seed"] == 11);
  CHECK(record["process"]["n"] == 7);
}
