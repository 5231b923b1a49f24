#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nlf/field.hpp"

namespace nlf {

enum class Family { BBM, BN, BSVY };

const char* family_name(Family f);
Family family_from_string(const std::string& s);

// Which non-local functional to evaluate and at which point of its sweep:
//   BBM : iint_{|x-y|<r} |u(x)-u(y)|^p / |x-y|^p * eps |x-y|^{eps-N}
//   BN  : iint_{|u(x)-u(y)|>delta} delta^p / |x-y|^{N+p}
//   BSVY: lambda^p * nu_gamma(E_{lambda,gamma/p}(u)), the level-set family
// BN is the gamma = -p member of the BSVY family and is evaluated through
// the same code path.
struct FunctionalSpec {
  Family family = Family::BSVY;
  double p = 1.0;
  double gamma = -1.0;      // BSVY only
  double sweep = 1.0;       // eps (BBM), delta (BN), lambda (BSVY)
  double radial_cut = 1.0;  // r (BBM only)

  void validate() const;
  // Effective gamma of the level-set representation (BN maps to -p).
  double gamma_eff() const { return family == Family::BN ? -p : gamma; }
  // beta = 1 + gamma/p, the difference-quotient exponent.
  double beta() const { return 1.0 + gamma_eff() / p; }
};

enum class EngineKind { Deterministic1d, MonteCarlo };

const char* engine_name(EngineKind e);
EngineKind engine_from_string(const std::string& s);

struct IntegrationPlan {
  EngineKind engine = EngineKind::Deterministic1d;
  int outer_nodes = 12;    // Gauss nodes per outer panel
  int radial_nodes = 192;  // scan grid for event boundaries
  long samples = 200000;   // Monte Carlo
  int strata = 16;         // logarithmic radial strata
  std::uint64_t seed = 0;
  std::optional<double> h_min;  // explicit overrides; otherwise auto
  std::optional<double> h_max;
  double tol = 1e-9;

  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;  // standard error (MC) or node-refinement delta (deterministic)
  bool diverged = false;
  double tail_bound = 0.0;
  long n_evaluations = 0;
  FunctionalSpec spec;
  IntegrationPlan plan;
};

// Radial cutoffs for the (x, sigma, h) representation. Exact flags mark
// cutoffs outside which events are impossible; otherwise the cutoff was
// chosen so the analytic tail mass stays below plan.tol and tail_bound
// reports it. `divergent_head` marks an h -> 0 tail whose kernel mass has no
// finite bound at the tolerance; evaluation then probes for divergence.
struct Cutoffs {
  double h_min = 0.0;
  double h_max = 0.0;
  bool h_min_exact = false;
  bool h_max_exact = false;
  double tail_bound = 0.0;
  bool divergent_head = false;
};

Cutoffs auto_cutoffs(const ScalarField& u, const FunctionalSpec& spec, double tol = 1e-9);

}  // namespace nlf
