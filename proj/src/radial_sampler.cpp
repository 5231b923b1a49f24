#include "nlf/radial_sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace nlf {

RadialSampler::RadialSampler(double gamma_eff, double h_min, double h_max)
    : gamma_(gamma_eff), h_min_(h_min), h_max_(h_max) {
  if (h_min < 0.0 || (h_min == 0.0 && gamma_eff <= 0.0))
    throw std::invalid_argument("RadialSampler: h_min must be > 0 (>= 0 only for gamma_eff > 0)");
  if (!(h_max > h_min)) throw std::invalid_argument("RadialSampler: need h_min < h_max");
  if (gamma_ == 0.0) {
    pow_lo_ = std::log(h_min_);
    pow_hi_ = std::log(h_max_);
    mass_ = pow_hi_ - pow_lo_;
  } else {
    pow_lo_ = std::pow(h_min_, gamma_);
    pow_hi_ = std::pow(h_max_, gamma_);
    mass_ = (pow_hi_ - pow_lo_) / gamma_;
  }
}

double RadialSampler::sample(Rng& rng) const {
  const double v = rng.uniform();
  if (gamma_ == 0.0) return std::exp(pow_lo_ + v * (pow_hi_ - pow_lo_));
  return std::pow(pow_lo_ + v * (pow_hi_ - pow_lo_), 1.0 / gamma_);
}

}  // namespace nlf
