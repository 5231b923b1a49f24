#pragma once

#include <string>
#include <vector>

#include "nlf/engine.hpp"
#include "nlf/sweep.hpp"

namespace nlf {

// Step-field behavior classes across the (p, gamma) plane. grows-unbounded
// means the values grow without bound along the probed ladder direction;
// diverges-pointwise means the functional is infinite at a finite parameter.
enum class RegimeClass { FinitePositiveLimit, TendsToZero, DivergesPointwise, GrowsUnbounded };

const char* regime_class_name(RegimeClass c);

struct RegimeRow {
  double p = 1.0;
  double gamma = -1.0;
  RegimeClass small_lambda = RegimeClass::TendsToZero;
  RegimeClass large_lambda = RegimeClass::TendsToZero;
  double small_limit = 0.0;  // meaningful for FinitePositiveLimit
  double large_limit = 0.0;
  double small_slope = 0.0;  // log-log slope of the vanishing branch
  std::string checked_inequality;
  bool pass = false;
};

// Classifies the unit step's small- and large-lambda behavior with the step
// oracle and cross-checks each row against the applicable limit inequality.
std::vector<RegimeRow> regime_scan(const std::vector<double>& ps,
                                   const std::vector<double>& gammas);

struct RecoveryPoint {
  int k = 0;
  double lambda = 0.0;
  long cells = 0;
  double lp_err = 0.0;  // ||u_k - u||_p, sampled
  Estimate phi;
};

struct RecoveryReport {
  std::vector<RecoveryPoint> points;
  double seminorm_p1 = 0.0;
  bool lp_strictly_decreasing = false;
  bool phi_decreasing = false;
  double final_phi = 0.0;
};

// Dyadic quantization recovery sequence: u_k on cubes of side 2^-k paired
// with lambda_k from a decreasing schedule (2^-k by default).
RecoveryReport gamma_recovery_experiment(const ScalarField& u, double p, double gamma, int k_lo,
                                         int k_hi, const IntegrationPlan& plan,
                                         double lambda_base = 2.0);

struct PoincareRow {
  std::string field;
  double delta = 0.0;
  double lhs = 0.0;                 // iint_{BxB} |u(x)-u(y)|^p
  double rhs_functional_term = 0.0; // |B|^{(N+p)/N} * threshold functional on BxB
  double rhs_delta_term = 0.0;      // delta^p |B|^2
  double empirical_constant = 0.0;
  bool functional_diverged = false; // engine diverged; constant uses a grid probe
};

std::vector<PoincareRow> poincare_study(const ScalarField& u, double b_lo, double b_hi, double p,
                                        const std::vector<double>& deltas, int grid = 1500);

}  // namespace nlf
