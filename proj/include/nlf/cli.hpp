#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlf {

// Exit statuses; each failure mode carries a distinct message.
enum ExitStatus {
  kOk = 0,
  kBadConfig = 2,
  kUnknownField = 3,
  kBudgetExceeded = 4,
  kDivergenceAbort = 5,
};

struct RunConfig {
  std::string command;
  std::string field_id = "step1d";
  std::string family = "bsvy";
  double p = 1.0;
  double gamma = -0.5;
  double sweep = 0.5;
  double radial_cut = 1.0;

  // ladder (sweep command)
  double ladder_start = 0.5;
  double ladder_ratio = 0.5;
  int ladder_count = 8;
  std::string direction = "to-zero";
  std::optional<double> target;
  double rel_tol = 0.05;

  // plan
  std::string engine = "deterministic-1d";
  int outer_nodes = 12;
  int radial_nodes = 192;
  long samples = 200000;
  int strata = 16;
  std::uint64_t seed = 0;
  double h_min = 0.0;  // explicit radial cutoffs; 0 = auto
  double h_max = 0.0;

  // constants command
  std::vector<int> dims = {1, 2, 3};
  std::vector<double> ps = {1.0, 1.5, 2.0, 3.0};

  // scan command
  std::vector<double> scan_ps = {1.0, 1.5, 2.0};
  std::vector<double> scan_gammas = {-3.0, -2.0, -1.5, -1.0, -0.5, -0.25, 0.5, 1.0, 2.0};

  // gamma-recovery command
  int k_min = 2;
  int k_max = 7;

  // poincare command
  std::vector<std::string> poincare_fields = {"step1d", "gauss1d", "tent1d", "const"};
  std::vector<double> deltas = {0.1, 0.3, 0.5};
  int grid = 1500;

  std::string out_dir;
  bool plot = false;
  std::vector<std::string> report_dirs;
};

// Executes one command; writes results.csv / manifest.json (and plot.svg on
// request) under out_dir when given. Returns an ExitStatus.
int run(const RunConfig& cfg);

// Full command line entry point (flag parsing, optional --config JSON file
// whose values flags override).
int run_cli(int argc, const char* const* argv);

}  // namespace nlf
