#pragma once

#include "nlf/field.hpp"
#include "nlf/functional.hpp"

namespace nlf {

// Direct tensor-grid midpoint evaluation of the defining double integral on
// the padded support box. No radial transformation, no importance sampling;
// test oracle only. `grid` counts cells per axis across the padded box.
// `max_separation` drops pairs beyond that distance, aligning the truncation
// with an engine evaluated under an explicit h_max.
Estimate brute_force_functional(const ScalarField& u, const FunctionalSpec& spec, int grid,
                                double box_pad, double max_separation = 0.0);

}  // namespace nlf
