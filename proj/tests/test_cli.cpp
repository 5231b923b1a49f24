#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "nlf/cli.hpp"

using namespace nlf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "nlf_cli_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_args(std::initializer_list<const char*> args) {
  std::vector<const char*> argv = {"nlfl"};
  argv.insert(argv.end(), args);
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("constants command writes the expected CSV row") {
  auto dir = fresh_dir("constants");
  RunConfig cfg;
  cfg.command = "constants";
  cfg.dims = {2};
  cfg.ps = {1.0};
  cfg.out_dir = dir.string();
  CHECK(run(cfg) == kOk);
  const std::string csv = slurp(dir / "results.csv");
  CHECK(csv.find("N,p,value,method") != std::string::npos);
  CHECK(csv.find("2,1,3.99999999999999") != std::string::npos);
  auto man = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(man["command"] == "constants");
  CHECK(man.contains("wall_ms"));
}

TEST_CASE("eval of the zero field returns a zero record") {
  RunConfig cfg;
  cfg.command = "eval";
  cfg.field_id = "const";
  cfg.family = "bsvy";
  cfg.p = 1;
  cfg.gamma = -0.5;
  cfg.sweep = 0.1;
  CHECK(run(cfg) == kOk);
}

TEST_CASE("validation failures carry distinct statuses") {
  {
    RunConfig cfg;
    cfg.command = "eval";
    cfg.field_id = "step1d";
    cfg.family = "bsvy";
    cfg.gamma = 0.0;  // violates the bsvy invariant
    CHECK(run(cfg) == kBadConfig);
  }
  {
    RunConfig cfg;
    cfg.command = "eval";
    cfg.field_id = "no-such-field";
    CHECK(run(cfg) == kUnknownField);
  }
  {
    RunConfig cfg;
    cfg.command = "gamma-recovery";
    cfg.field_id = "tent1d";
    cfg.p = 1;
    cfg.gamma = -0.5;
    cfg.k_min = 30;
    cfg.k_max = 31;  // cell budget
    CHECK(run(cfg) == kBudgetExceeded);
  }
  {
    RunConfig cfg;
    cfg.command = "nonsense";
    CHECK(run(cfg) == kBadConfig);
  }
}

TEST_CASE("sweep aborts with the divergence status") {
  auto dir = fresh_dir("divergent_sweep");
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.field_id = "step1d";
  cfg.family = "bsvy";
  cfg.p = 1;
  cfg.gamma = -1.0;
  cfg.ladder_start = 0.5;
  cfg.ladder_count = 5;
  cfg.out_dir = dir.string();
  CHECK(run(cfg) == kDivergenceAbort);
  auto man = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(man["diverged"] == true);
}

TEST_CASE("identical config and seed give byte-identical results.csv") {
  auto d1 = fresh_dir("repro1"), d2 = fresh_dir("repro2");
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.field_id = "gauss1d";
  cfg.family = "bn";
  cfg.p = 2;
  cfg.engine = "monte-carlo";
  cfg.samples = 20000;
  cfg.seed = 77;
  cfg.ladder_start = 0.4;
  cfg.ladder_count = 5;
  cfg.plot = true;
  cfg.out_dir = d1.string();
  CHECK(run(cfg) == kOk);
  cfg.out_dir = d2.string();
  CHECK(run(cfg) == kOk);
  const std::string a = slurp(d1 / "results.csv"), b = slurp(d2 / "results.csv");
  CHECK(a == b);
  CHECK(!a.empty());
  CHECK(a.back() == '\n');
  CHECK(fs::exists(d1 / "plot.svg"));
}

TEST_CASE("results.csv rows trace back to manifest fields") {
  auto dir = fresh_dir("roundtrip");
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.field_id = "tent1d";
  cfg.family = "bsvy";
  cfg.p = 1;
  cfg.gamma = -0.5;
  cfg.seed = 5;
  cfg.ladder_start = 0.4;
  cfg.ladder_ratio = 0.5;
  cfg.ladder_count = 5;
  cfg.out_dir = dir.string();
  REQUIRE(run(cfg) == kOk);

  auto man = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(man["field"] == "tent1d");
  CHECK(man["seed"] == 5);
  CHECK(man.contains("run_id"));
  const double start = man["ladder"]["start"];
  const double ratio = man["ladder"]["ratio"];

  std::istringstream csv(slurp(dir / "results.csv"));
  std::string line;
  std::getline(csv, line);  // header
  CHECK(line == "index,param,value,error,diverged,tail_bound,n_evaluations,seed");
  int rows = 0;
  while (std::getline(csv, line)) {
    int idx;
    double param;
    unsigned long long seed;
    REQUIRE(std::sscanf(line.c_str(), "%d,%lf", &idx, &param) == 2);
    const auto last_comma = line.rfind(',');
    REQUIRE(std::sscanf(line.c_str() + last_comma + 1, "%llu", &seed) == 1);
    CHECK(param == doctest::Approx(start * std::pow(ratio, idx)).epsilon(1e-14));
    CHECK(seed == (5ull ^ static_cast<unsigned long long>(idx)));
    ++rows;
  }
  CHECK(rows == man["ladder"]["count"]);
}

TEST_CASE("report aggregates run directories, failures first") {
  auto pass_dir = fresh_dir("run_pass");
  {
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.field_id = "gauss1d";
    cfg.family = "bbm";
    cfg.p = 2;
    cfg.radial_cut = 1.0;
    cfg.ladder_start = 0.2;
    cfg.ladder_count = 5;
    cfg.outer_nodes = 8;
    cfg.radial_nodes = 96;
    cfg.target = 2.5066282746310007;  // K_{1,2} sqrt(pi/2)
    cfg.rel_tol = 0.05;
    cfg.out_dir = pass_dir.string();
    CHECK(run(cfg) == kOk);
  }
  auto unreadable = fresh_dir("run_unreadable");

  {
    RunConfig cfg;
    cfg.command = "report";
    cfg.report_dirs = {pass_dir.string(), unreadable.string()};
    auto out = fresh_dir("report_out");
    cfg.out_dir = out.string();
    CHECK(run(cfg) == kOk);
    const std::string csv = slurp(out / "results.csv");
    CHECK(csv.find("pass") != std::string::npos);
    CHECK(csv.find("unreadable") != std::string::npos);
  }
  // a failing run (target far off) must sort before the passing one
  auto fail_dir = fresh_dir("run_fail");
  {
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.field_id = "tent1d";
    cfg.family = "bsvy";
    cfg.p = 1;
    cfg.gamma = -0.5;
    cfg.ladder_start = 0.4;
    cfg.ladder_count = 5;
    cfg.target = 100.0;  // nowhere near
    cfg.rel_tol = 0.05;
    cfg.out_dir = fail_dir.string();
    CHECK(run(cfg) == kOk);
  }
  {
    RunConfig cfg;
    cfg.command = "report";
    cfg.report_dirs = {pass_dir.string(), fail_dir.string()};
    auto out = fresh_dir("report_mixed");
    cfg.out_dir = out.string();
    CHECK(run(cfg) == kOk);
    const std::string csv = slurp(out / "results.csv");
    const auto fail_pos = csv.find(",fail");
    const auto pass_pos = csv.find(",pass");
    REQUIRE(fail_pos != std::string::npos);
    REQUIRE(pass_pos != std::string::npos);
    CHECK(fail_pos < pass_pos);
  }
  {
    RunConfig cfg;
    cfg.command = "report";
    cfg.report_dirs = {};
    CHECK(run(cfg) == kOk);  // empty table, success
  }
  {
    RunConfig cfg;
    cfg.command = "report";
    cfg.report_dirs = {unreadable.string()};
    CHECK(run(cfg) == kBadConfig);  // all rows unreadable
  }
}

TEST_CASE("flag parsing drives the same paths") {
  CHECK(run_args({"oracle", "--gamma", "1", "--p", "1", "--lambda", "10"}) == kOk);
  CHECK(run_args({"fields"}) == kOk);
  CHECK(run_args({"eval", "--field", "const", "--family", "bsvy", "--p", "1", "--gamma",
                  "-0.5", "--lambda", "0.1"}) == kOk);
  CHECK(run_args({"eval", "--field", "unknown-id"}) == kUnknownField);
}

TEST_CASE("config file values load and flags override them") {
  auto dir = fresh_dir("config");
  const fs::path cfg_path = dir / "run.json";
  {
    std::ofstream os(cfg_path);
    os << R"({"command":"oracle","gamma":1.0,"p":1.0,"sweep":10.0})";
  }
  CHECK(run_args({"--config", cfg_path.string().c_str()}) == kOk);
  // flag overrides the file's gamma with an invalid value for bsvy eval
  const fs::path cfg2 = dir / "run2.json";
  {
    std::ofstream os(cfg2);
    os << R"({"command":"eval","field":"step1d","family":"bsvy","p":1.0,"gamma":-0.5,"sweep":0.5})";
  }
  CHECK(run_args({"--config", cfg2.string().c_str()}) == kOk);
  CHECK(run_args({"eval", "--config", cfg2.string().c_str(), "--gamma", "0"}) == kBadConfig);
}
