#pragma once

#include <optional>
#include <utility>

#include "nlf/field.hpp"
#include "nlf/functional.hpp"

namespace nlf {

// Evaluates the chosen non-local functional on u. The deterministic engine
// requires dim = 1; the Monte Carlo engine handles dim 1 and 2. `domain`
// restricts both points of the pair to an interval (1-D only).
Estimate eval_functional(const ScalarField& u, const FunctionalSpec& spec,
                         const IntegrationPlan& plan,
                         std::optional<std::pair<double, double>> domain = std::nullopt);

struct BnBsvyReport {
  Estimate bn;
  Estimate bsvy;
  bool bitwise_equal = false;
  bool agree_within_error = false;
};

// Evaluates BN(delta) and BSVY(gamma = -p, lambda = delta) under the same
// plan and seed; the two must coincide.
BnBsvyReport bn_equals_bsvy_check(const ScalarField& u, double p, double delta,
                                  const IntegrationPlan& plan);

}  // namespace nlf
