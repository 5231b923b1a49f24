#pragma once

#include "nlf/field.hpp"

namespace nlf {

enum class Provenance { ExactClosedForm, NumericQuadrature };

// Phi(u): the W^{1,p} seminorm (|grad u|^p mass) for p > 1, total-variation
// mass for p = 1. `infinite` marks discontinuous fields probed at p > 1.
struct SeminormValue {
  double p = 1.0;
  double value = 0.0;
  bool infinite = false;
  Provenance provenance = Provenance::ExactClosedForm;
};

SeminormValue seminorm(const ScalarField& u, double p);

// Quadrature-only path; rejects piecewise-constant fields at p > 1 since
// there is nothing finite to integrate.
double seminorm_numeric(const ScalarField& u, double p);

}  // namespace nlf
