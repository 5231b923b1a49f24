#pragma once

#include <string>

#include "nlf/brute_types.hpp"

namespace nlf {

// Exact value of the level-set functional for the 1-D unit step 1_{(0,1)}.
//
// The event set reduces to separating pairs {x in (0,1), y outside} with the
// radial condition s = |x-y| vs t = lambda^{-1/beta} (s < t when beta > 0,
// s > t when beta < 0, all s when beta = 0 and lambda < 1). The remaining
// one-variable integrals of s^{gamma-1} are evaluated in closed form, with a
// factor 4 for pair orientation and the two sides of the support.
struct StepOracleResult {
  bool infinite = false;
  double value = 0.0;
  enum class Regime { BetaPositive, BetaZero, BetaNegative } regime = Regime::BetaPositive;
  // pieces of the reduction, for inspection / JSON dumps
  double beta = 0.0;
  double threshold_t = 0.0;  // lambda^{-1/beta}; 0 in the beta = 0 regime
  double inner_integral = 0.0;
  double symmetry_factor = 4.0;
  std::string branch;

  std::string to_json() const;
};

StepOracleResult step_phi_lambda(double gamma, double p, double lambda);

}  // namespace nlf
