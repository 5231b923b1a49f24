#pragma once

#include <cstdint>

#include "nlf/rng.hpp"

namespace nlf {

// Draws radii with density proportional to h^{gamma_eff - 1} on
// [h_min, h_max] via the closed-form inverse CDF (log-uniform when
// gamma_eff = 0). The constant `weight` makes mean(weight * f(h_i)) unbiased
// for integrals of f(h) h^{gamma_eff - 1} dh.
class RadialSampler {
 public:
  RadialSampler(double gamma_eff, double h_min, double h_max);

  double sample(Rng& rng) const;
  double weight() const { return mass_; }  // integral of h^{gamma_eff-1} over the range
  double gamma_eff() const { return gamma_; }

 private:
  double gamma_;
  double h_min_;
  double h_max_;
  double mass_;
  double pow_lo_ = 0.0;  // h_min^gamma (or log h_min when gamma = 0)
  double pow_hi_ = 0.0;
};

}  // namespace nlf
