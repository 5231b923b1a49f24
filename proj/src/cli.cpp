#include "nlf/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlf/brute_types.hpp"
#include "nlf/constants.hpp"
#include "nlf/experiments.hpp"
#include "nlf/io.hpp"
#include "nlf/seminorm.hpp"
#include "nlf/step_oracle.hpp"
#include "nlf/sweep.hpp"

namespace nlf {

namespace {

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;
using nlohmann::json;

IntegrationPlan plan_from(const RunConfig& cfg) {
  IntegrationPlan plan;
  plan.engine = engine_from_string(cfg.engine);
  plan.outer_nodes = cfg.outer_nodes;
  plan.radial_nodes = cfg.radial_nodes;
  plan.samples = cfg.samples;
  plan.strata = cfg.strata;
  plan.seed = cfg.seed;
  if (cfg.h_min > 0.0) plan.h_min = cfg.h_min;
  if (cfg.h_max > 0.0) plan.h_max = cfg.h_max;
  return plan;
}

FunctionalSpec spec_from(const RunConfig& cfg) {
  FunctionalSpec spec;
  spec.family = family_from_string(cfg.family);
  spec.p = cfg.p;
  spec.gamma = cfg.gamma;
  spec.sweep = cfg.sweep;
  spec.radial_cut = cfg.radial_cut;
  return spec;
}

json plan_json(const IntegrationPlan& plan) {
  return json{{"engine", engine_name(plan.engine)}, {"outer_nodes", plan.outer_nodes},
              {"radial_nodes", plan.radial_nodes}, {"samples", plan.samples},
              {"strata", plan.strata},             {"seed", plan.seed},
              {"tol", plan.tol}};
}

json config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["field"] = cfg.field_id;
  j["family"] = cfg.family;
  j["p"] = cfg.p;
  j["gamma"] = cfg.gamma;
  j["sweep"] = cfg.sweep;
  j["radial_cut"] = cfg.radial_cut;
  j["ladder"] = json{{"start", cfg.ladder_start},
                     {"ratio", cfg.ladder_ratio},
                     {"count", cfg.ladder_count},
                     {"direction", cfg.direction}};
  if (cfg.target) j["target"] = *cfg.target;
  j["rel_tol"] = cfg.rel_tol;
  j["engine"] = cfg.engine;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out_dir;
  return j;
}

// Content hash of the resolved config; doubles as the run id.
std::string run_id_of(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunWriter {
  fs::path dir;
  bool enabled = false;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit RunWriter(const std::string& out) {
    if (out.empty()) return;
    dir = out;
    fs::create_directories(dir);
    enabled = true;
  }
  void results(const std::string& csv) const {
    if (enabled) write_text_file((dir / "results.csv").string(), csv);
  }
  void manifest(json j) const {
    if (!enabled) return;
    j["versions"] = json{{"nlfl", kVersion}};
    j["run_id"] = run_id_of(j);
    j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    write_text_file((dir / "manifest.json").string(), j.dump(2) + "\n");
  }
  void plot(const std::string& svg) const {
    if (enabled) write_text_file((dir / "plot.svg").string(), svg);
  }
};

int cmd_constants(const RunConfig& cfg) {
  std::ostringstream csv;
  csv << "N,p,value,method\n";
  for (int n : cfg.dims)
    for (double p : cfg.ps) {
      auto k = sphere_constant(n, p);
      csv << n << ',' << fmt_double(p) << ',' << fmt_double(k.value) << ','
          << (k.method == SphereConstant::Method::ClosedForm ? "closed-form"
                                                             : "reduced-1d-quadrature")
          << '\n';
    }
  std::cout << csv.str();
  RunWriter w(cfg.out_dir);
  w.results(csv.str());
  w.manifest(config_json(cfg));
  return kOk;
}

int cmd_eval(const RunConfig& cfg) {
  const ScalarField u = find_field(cfg.field_id);
  const FunctionalSpec spec = spec_from(cfg);
  spec.validate();
  const IntegrationPlan plan = plan_from(cfg);
  plan.validate();
  const Estimate est = eval_functional(u, spec, plan);
  const std::string line = estimate_to_json(est, u.id);
  std::cout << line << "\n";
  RunWriter w(cfg.out_dir);
  std::ostringstream csv;
  csv << "param,value,error,diverged,tail_bound,n_evaluations,seed\n"
      << fmt_double(spec.sweep) << ',' << fmt_double(est.value) << ',' << fmt_double(est.error)
      << ',' << (est.diverged ? 1 : 0) << ',' << fmt_double(est.tail_bound) << ','
      << est.n_evaluations << ',' << plan.seed << '\n';
  w.results(csv.str());
  json man = config_json(cfg);
  man["plan"] = plan_json(plan);
  man["diverged"] = est.diverged;
  w.manifest(man);
  return kOk;
}

int cmd_oracle(const RunConfig& cfg) {
  const auto r = step_phi_lambda(cfg.gamma, cfg.p, cfg.sweep);
  std::cout << r.to_json() << "\n";
  RunWriter w(cfg.out_dir);
  std::ostringstream csv;
  csv << "gamma,p,lambda,value,infinite,regime,branch\n"
      << fmt_double(cfg.gamma) << ',' << fmt_double(cfg.p) << ',' << fmt_double(cfg.sweep) << ','
      << fmt_double(r.value) << ',' << (r.infinite ? 1 : 0) << ','
      << (r.regime == StepOracleResult::Regime::BetaPositive
              ? "beta>0"
              : r.regime == StepOracleResult::Regime::BetaZero ? "beta=0" : "beta<0")
      << ',' << r.branch << '\n';
  w.results(csv.str());
  w.manifest(config_json(cfg));
  return kOk;
}

int cmd_sweep(const RunConfig& cfg) {
  const ScalarField u = find_field(cfg.field_id);
  FunctionalSpec spec = spec_from(cfg);
  spec.sweep = cfg.ladder_start;
  spec.validate();
  const IntegrationPlan plan = plan_from(cfg);
  plan.validate();
  Ladder ladder;
  ladder.start = cfg.ladder_start;
  ladder.ratio = cfg.ladder_ratio;
  ladder.count = cfg.ladder_count;
  if (cfg.direction == "to-zero") ladder.direction = SweepDirection::TowardZero;
  else if (cfg.direction == "to-inf") ladder.direction = SweepDirection::TowardInfinity;
  else throw std::invalid_argument("direction must be to-zero or to-inf");

  const SweepResult res = run_sweep(u, spec, ladder, plan, cfg.target);

  RunWriter w(cfg.out_dir);
  w.results(sweep_results_csv(res));
  json man = config_json(cfg);
  man["plan"] = plan_json(plan);
  man["diverged"] = res.diverged;
  man["fit"] = json{{"limit", res.fit.limit},     {"uncertainty", res.fit.uncertainty},
                    {"rate", res.fit.rate},       {"rate_se", res.fit.rate_se},
                    {"stable", res.fit.stable},   {"loglog_slope", res.loglog_slope},
                    {"limit_in_hull", res.limit_in_hull}};
  if (res.relative_gap) man["relative_gap"] = *res.relative_gap;
  w.manifest(man);
  if (cfg.plot) w.plot(sweep_plot_svg(res));

  if (res.diverged) {
    std::cerr << "sweep aborted: divergent estimate in the ladder\n";
    return kDivergenceAbort;
  }
  std::cout << "extrapolated_limit=" << fmt_double(res.fit.limit) << " rate="
            << fmt_double(res.fit.rate) << (res.fit.stable ? "" : " (unstable)");
  if (res.relative_gap) std::cout << " relative_gap=" << fmt_double(*res.relative_gap);
  std::cout << "\n";
  return kOk;
}

int cmd_scan(const RunConfig& cfg) {
  const auto rows = regime_scan(cfg.scan_ps, cfg.scan_gammas);
  std::ostringstream csv;
  csv << "p,gamma,small_lambda,large_lambda,small_limit,large_limit,small_slope,"
         "checked_inequality,pass\n";
  for (const auto& r : rows) {
    csv << fmt_double(r.p) << ',' << fmt_double(r.gamma) << ','
        << regime_class_name(r.small_lambda) << ',' << regime_class_name(r.large_lambda) << ','
        << fmt_double(r.small_limit) << ',' << fmt_double(r.large_limit) << ','
        << fmt_double(r.small_slope) << ",\"" << r.checked_inequality << "\","
        << (r.pass ? 1 : 0) << '\n';
  }
  std::cout << csv.str();
  RunWriter w(cfg.out_dir);
  w.results(csv.str());
  w.manifest(config_json(cfg));
  return kOk;
}

int cmd_gamma_recovery(const RunConfig& cfg) {
  const ScalarField u = find_field(cfg.field_id);
  const IntegrationPlan plan = plan_from(cfg);
  const auto rep = gamma_recovery_experiment(u, cfg.p, cfg.gamma, cfg.k_min, cfg.k_max, plan);
  std::ostringstream csv;
  csv << "k,lambda,cells,lp_err,phi_value,phi_error,diverged\n";
  for (const auto& pt : rep.points)
    csv << pt.k << ',' << fmt_double(pt.lambda) << ',' << pt.cells << ','
        << fmt_double(pt.lp_err) << ',' << fmt_double(pt.phi.value) << ','
        << fmt_double(pt.phi.error) << ',' << (pt.phi.diverged ? 1 : 0) << '\n';
  std::cout << csv.str();
  std::cout << "seminorm_p1=" << fmt_double(rep.seminorm_p1)
            << " lp_strictly_decreasing=" << rep.lp_strictly_decreasing
            << " phi_decreasing=" << rep.phi_decreasing << "\n";
  RunWriter w(cfg.out_dir);
  w.results(csv.str());
  json man = config_json(cfg);
  man["seminorm_p1"] = rep.seminorm_p1;
  man["lp_strictly_decreasing"] = rep.lp_strictly_decreasing;
  man["phi_decreasing"] = rep.phi_decreasing;
  w.manifest(man);
  if (cfg.plot) {
    std::vector<double> xs, ys;
    for (const auto& pt : rep.points) {
      xs.push_back(pt.lambda);
      ys.push_back(pt.phi.value);
    }
    w.plot(series_plot_svg(xs, ys, "log10 lambda_k", "log10 phi"));
  }
  return kOk;
}

int cmd_poincare(const RunConfig& cfg) {
  std::ostringstream csv;
  csv << "field,delta,lhs,rhs_functional_term,rhs_delta_term,empirical_constant,"
         "functional_diverged\n";
  double corpus_max = 0.0;
  std::vector<double> plot_xs, plot_ys;
  for (const auto& id : cfg.poincare_fields) {
    const ScalarField u = find_field(id);
    if (u.dim != 1) continue;
    const double b_lo = u.support.lo[0] - 1.0, b_hi = u.support.hi[0] + 1.0;
    for (const auto& row : poincare_study(u, b_lo, b_hi, cfg.p, cfg.deltas, cfg.grid)) {
      csv << row.field << ',' << fmt_double(row.delta) << ',' << fmt_double(row.lhs) << ','
          << fmt_double(row.rhs_functional_term) << ',' << fmt_double(row.rhs_delta_term) << ','
          << fmt_double(row.empirical_constant) << ',' << (row.functional_diverged ? 1 : 0)
          << '\n';
      corpus_max = std::max(corpus_max, row.empirical_constant);
      plot_xs.push_back(row.delta);
      plot_ys.push_back(row.empirical_constant);
    }
  }
  std::cout << csv.str();
  std::cout << "corpus_max_constant=" << fmt_double(corpus_max) << "\n";
  RunWriter w(cfg.out_dir);
  w.results(csv.str());
  json man = config_json(cfg);
  man["corpus_max_constant"] = corpus_max;
  w.manifest(man);
  if (cfg.plot) w.plot(series_plot_svg(plot_xs, plot_ys, "log10 delta", "log10 constant"));
  return kOk;
}

int cmd_report(const RunConfig& cfg) {
  struct Row {
    bool readable = false;
    bool pass = false;
    std::string dir, field, family;
    double p = 0, gamma = 0, limit = 0, target = 0, gap = -1;
    bool has_target = false;
  };
  std::vector<Row> rows;
  for (const auto& d : cfg.report_dirs) {
    Row row;
    row.dir = d;
    try {
      std::ifstream is(fs::path(d) / "manifest.json");
      if (!is) throw std::runtime_error("missing manifest");
      json man = json::parse(is);
      row.field = man.value("field", "?");
      row.family = man.value("family", "?");
      row.p = man.value("p", 0.0);
      row.gamma = man.value("gamma", 0.0);
      if (man.contains("fit")) row.limit = man["fit"].value("limit", 0.0);
      if (man.contains("target")) {
        row.target = man["target"].get<double>();
        row.has_target = true;
      }
      if (man.contains("relative_gap")) row.gap = man["relative_gap"].get<double>();
      const double tol = man.value("rel_tol", 0.05);
      const bool diverged = man.value("diverged", false);
      row.pass = !diverged && (!row.has_target || (row.gap >= 0 && row.gap <= tol));
      row.readable = true;
    } catch (...) {
      row.readable = false;
    }
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return (a.readable && !a.pass) > (b.readable && !b.pass);  // failures first
  });

  std::ostringstream csv;
  csv << "dir,field,family,p,gamma,extrapolated_limit,target,relative_gap,status\n";
  for (const auto& r : rows) {
    if (!r.readable) {
      csv << r.dir << ",,,,,,,,unreadable\n";
      continue;
    }
    csv << r.dir << ',' << r.field << ',' << r.family << ',' << fmt_double(r.p) << ','
        << fmt_double(r.gamma) << ',' << fmt_double(r.limit) << ','
        << (r.has_target ? fmt_double(r.target) : "") << ','
        << (r.gap >= 0 ? fmt_double(r.gap) : "") << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
  std::cout << csv.str();
  RunWriter w(cfg.out_dir);
  w.results(csv.str());
  w.manifest(config_json(cfg));
  if (!rows.empty()) {
    bool any_readable = false;
    for (const auto& r : rows) any_readable |= r.readable;
    if (!any_readable) {
      std::cerr << "report: no readable manifests\n";
      return kBadConfig;
    }
  }
  return kOk;
}

int cmd_fields(const RunConfig& cfg) {
  const std::string j = corpus_catalog_json();
  std::cout << j << "\n";
  RunWriter w(cfg.out_dir);
  if (!cfg.out_dir.empty()) write_text_file((fs::path(cfg.out_dir) / "fields.json").string(), j);
  return kOk;
}

}  // namespace

int run(const RunConfig& cfg) {
  try {
    if (cfg.command == "constants") return cmd_constants(cfg);
    if (cfg.command == "eval") return cmd_eval(cfg);
    if (cfg.command == "oracle") return cmd_oracle(cfg);
    if (cfg.command == "sweep") return cmd_sweep(cfg);
    if (cfg.command == "scan") return cmd_scan(cfg);
    if (cfg.command == "gamma-recovery") return cmd_gamma_recovery(cfg);
    if (cfg.command == "poincare") return cmd_poincare(cfg);
    if (cfg.command == "report") return cmd_report(cfg);
    if (cfg.command == "fields") return cmd_fields(cfg);
    std::cerr << "unknown command: " << cfg.command << "\n";
    return kBadConfig;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    std::cerr << (msg.find("unknown field") != std::string::npos ? "" : "invalid config: ")
              << msg << "\n";
    return msg.find("unknown field") != std::string::npos ? kUnknownField : kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadConfig;
  }
}

namespace {

void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  json j = json::parse(is);
  if (j.contains("command")) cfg.command = j["command"];
  if (j.contains("field")) cfg.field_id = j["field"];
  if (j.contains("family")) cfg.family = j["family"];
  if (j.contains("p")) cfg.p = j["p"];
  if (j.contains("gamma")) cfg.gamma = j["gamma"];
  if (j.contains("sweep")) cfg.sweep = j["sweep"];
  if (j.contains("radial_cut")) cfg.radial_cut = j["radial_cut"];
  if (j.contains("ladder")) {
    auto& l = j["ladder"];
    if (l.contains("start")) cfg.ladder_start = l["start"];
    if (l.contains("ratio")) cfg.ladder_ratio = l["ratio"];
    if (l.contains("count")) cfg.ladder_count = l["count"];
    if (l.contains("direction")) cfg.direction = l["direction"];
  }
  if (j.contains("target")) cfg.target = j["target"].get<double>();
  if (j.contains("rel_tol")) cfg.rel_tol = j["rel_tol"];
  if (j.contains("engine")) cfg.engine = j["engine"];
  if (j.contains("outer_nodes")) cfg.outer_nodes = j["outer_nodes"];
  if (j.contains("radial_nodes")) cfg.radial_nodes = j["radial_nodes"];
  if (j.contains("samples")) cfg.samples = j["samples"];
  if (j.contains("strata")) cfg.strata = j["strata"];
  if (j.contains("seed")) cfg.seed = j["seed"];
  if (j.contains("out")) cfg.out_dir = j["out"];
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  RunConfig cfg;
  // config file values load first; explicit flags then override
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        apply_config_file(argv[i + 1], cfg);
      } catch (const std::exception& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kBadConfig;
      }
    }
  }

  CLI::App app{"numerical laboratory for non-local functionals of Sobolev/BV type"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override its values)");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir, "output directory for results.csv/manifest.json");
    sub->add_option("--seed", cfg.seed, "RNG seed (echoed to the manifest)");
    sub->add_option("--config", config_path, "JSON config file (already applied; flags override)");
  };
  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("--field", cfg.field_id, "corpus field identifier");
    sub->add_option("--family", cfg.family, "bbm | bn | bsvy");
    sub->add_option("--p", cfg.p, "integrability exponent p >= 1");
    sub->add_option("--gamma", cfg.gamma, "bsvy exponent gamma != 0");
    sub->add_option("--r", cfg.radial_cut, "bbm radial cut r");
    sub->add_option("--engine", cfg.engine, "deterministic-1d | monte-carlo");
    sub->add_option("--outer-nodes", cfg.outer_nodes, "Gauss nodes per outer panel");
    sub->add_option("--radial-nodes", cfg.radial_nodes, "radial scan nodes");
    sub->add_option("--samples", cfg.samples, "Monte Carlo samples");
    sub->add_option("--strata", cfg.strata, "logarithmic radial strata");
    sub->add_option("--h-min", cfg.h_min, "explicit lower radial cutoff (auto when 0)");
    sub->add_option("--h-max", cfg.h_max, "explicit upper radial cutoff (auto when 0)");
  };

  auto* c_const = app.add_subcommand("constants", "table of K_{N,p} over an (N,p) grid");
  c_const->add_option("--N", cfg.dims, "dimensions")->delimiter(',');
  c_const->add_option("--p", cfg.ps, "exponents")->delimiter(',');
  add_common(c_const);

  auto* c_eval = app.add_subcommand("eval", "evaluate one functional; prints a JSON record");
  add_spec(c_eval);
  c_eval->add_option("--sweep", cfg.sweep, "sweep parameter value");
  c_eval->add_option("--lambda", cfg.sweep, "alias for --sweep (bsvy)");
  c_eval->add_option("--delta", cfg.sweep, "alias for --sweep (bn)");
  c_eval->add_option("--eps", cfg.sweep, "alias for --sweep (bbm)");
  add_common(c_eval);

  auto* c_oracle = app.add_subcommand("oracle", "closed-form step-field value as JSON");
  c_oracle->add_option("--gamma", cfg.gamma);
  c_oracle->add_option("--p", cfg.p);
  c_oracle->add_option("--lambda", cfg.sweep);
  add_common(c_oracle);

  auto* c_sweep = app.add_subcommand("sweep", "parameter ladder with limit extrapolation");
  add_spec(c_sweep);
  c_sweep->add_option("--start", cfg.ladder_start, "first ladder value");
  c_sweep->add_option("--ratio", cfg.ladder_ratio, "geometric ratio");
  c_sweep->add_option("--count", cfg.ladder_count, "ladder length (>= 5)");
  c_sweep->add_option("--direction", cfg.direction, "to-zero | to-inf");
  double target_val = 0.0;
  auto* topt = c_sweep->add_option("--target", target_val, "reference limit");
  c_sweep->add_option("--rel-tol", cfg.rel_tol, "pass threshold on the relative gap");
  c_sweep->add_flag("--plot", cfg.plot, "write plot.svg");
  add_common(c_sweep);

  auto* c_scan = app.add_subcommand("scan", "step-field regime classification table");
  c_scan->add_option("--ps", cfg.scan_ps, "p values")->delimiter(',');
  c_scan->add_option("--gammas", cfg.scan_gammas, "gamma values (nonzero)")->delimiter(',');
  add_common(c_scan);

  auto* c_rec = app.add_subcommand("gamma-recovery", "dyadic quantization recovery ladder");
  add_spec(c_rec);
  c_rec->add_option("--k-min", cfg.k_min);
  c_rec->add_option("--k-max", cfg.k_max);
  c_rec->add_flag("--plot", cfg.plot, "write plot.svg");
  add_common(c_rec);

  auto* c_poin = app.add_subcommand("poincare", "empirical constants of the interval inequality");
  c_poin->add_option("--fields", cfg.poincare_fields, "corpus identifiers")->delimiter(',');
  c_poin->add_option("--deltas", cfg.deltas, "thresholds")->delimiter(',');
  c_poin->add_option("--p", cfg.p);
  c_poin->add_option("--grid", cfg.grid, "pair grid for the direct double integrals");
  c_poin->add_flag("--plot", cfg.plot, "write plot.svg");
  add_common(c_poin);

  auto* c_rep = app.add_subcommand("report", "aggregate sweep run directories");
  c_rep->add_option("dirs", cfg.report_dirs, "run directories");
  add_common(c_rep);

  auto* c_fields = app.add_subcommand("fields", "corpus catalog as JSON");
  add_common(c_fields);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadConfig;
  }

  if (c_const->parsed()) cfg.command = "constants";
  else if (c_eval->parsed()) cfg.command = "eval";
  else if (c_oracle->parsed()) cfg.command = "oracle";
  else if (c_sweep->parsed()) cfg.command = "sweep";
  else if (c_scan->parsed()) cfg.command = "scan";
  else if (c_rec->parsed()) cfg.command = "gamma-recovery";
  else if (c_poin->parsed()) cfg.command = "poincare";
  else if (c_rep->parsed()) cfg.command = "report";
  else if (c_fields->parsed()) cfg.command = "fields";
  if (topt->count() > 0) cfg.target = target_val;

  if (cfg.command.empty()) {
    std::cerr << app.help();
    return kBadConfig;
  }
  return run(cfg);
}

}  // namespace nlf
