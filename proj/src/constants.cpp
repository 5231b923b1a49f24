#include "nlf/constants.hpp"

#include <cmath>
#include <stdexcept>

#include "nlf/quad.hpp"

namespace nlf {

double sphere_surface_measure(int m) {
  if (m < 0) throw std::invalid_argument("sphere_surface_measure: m >= 0");
  if (m == 0) return 2.0;
  return 2.0 * std::pow(M_PI, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

SphereConstant sphere_constant(int dim, double p) {
  if (dim < 1) throw std::invalid_argument("sphere_constant: dim >= 1");
  if (p < 1.0) throw std::invalid_argument("sphere_constant: p >= 1");
  SphereConstant k;
  k.dim = dim;
  k.p = p;
  if (dim == 1) {
    k.value = 2.0;
    k.method = SphereConstant::Method::ClosedForm;
    return k;
  }
  k.method = SphereConstant::Method::Reduced1dQuadrature;
  if (dim == 2) {
    // |cos|^p has a kink at pi/2 for non-even p; folding to the quarter
    // period leaves an algebraic endpoint zero, which tanh-sinh absorbs.
    k.value = 4.0 * integrate_tanh_sinh(
                        [p](double t) { return std::pow(std::cos(t), p); }, 0.0, 0.5 * M_PI);
    return k;
  }
  // Polar reduction: |S^{N-2}| * int_0^pi |cos|^p sin^{N-2}, again folded to a
  // quarter period.
  const double shell = sphere_surface_measure(dim - 2);
  k.value = 2.0 * shell *
            integrate_tanh_sinh(
                [p, dim](double t) {
                  return std::pow(std::cos(t), p) * std::pow(std::sin(t), double(dim - 2));
                },
                0.0, 0.5 * M_PI);
  return k;
}

MollifierFamily bbm_mollifier_family(int dim) {
  MollifierFamily fam;
  fam.name = "bbm";
  fam.dim = dim;
  // rho_eps(r) = eps r^{eps-N} on (0,1): weighted form eps e^{s eps}.
  fam.log_weighted = [](double eps, double s) {
    return s <= 0.0 ? eps * std::exp(eps * s) : 0.0;
  };
  fam.support_log_hi = 0.0;
  return fam;
}

namespace {

double weighted_mass(const MollifierFamily& fam, double t, double log_lo, double log_hi) {
  if (log_hi <= log_lo) return 0.0;
  auto f = [&](double s) { return fam.log_weighted(t, s); };
  const int panels = std::max(64, static_cast<int>((log_hi - log_lo) / 4.0));
  return integrate_composite(f, log_lo, log_hi, panels, 16);
}

}  // namespace

MollifierCheck mollifier_check(const MollifierFamily& fam, const std::vector<double>& params) {
  MollifierCheck out;
  for (double t : params) {
    MollifierReport rep;
    rep.t = t;
    const double hi = fam.support_log_hi;
    // Extend the lower cutoff until the head mass has converged.
    double lo = -64.0;
    double mass = weighted_mass(fam, t, lo, hi);
    for (int round = 0; round < 12; ++round) {
      const double lo2 = lo * 2.0;
      const double mass2 = mass + weighted_mass(fam, t, lo2, lo);
      const double delta = std::abs(mass2 - mass);
      mass = mass2;
      lo = lo2;
      if (delta < 1e-13 * std::max(1.0, std::abs(mass))) break;
      if (round == 11) rep.integrable = false;
    }
    rep.total_mass = mass;
    rep.tail_mass_01 = weighted_mass(fam, t, std::log(0.1), hi);
    rep.tail_mass_05 = weighted_mass(fam, t, std::log(0.5), hi);
    rep.tail_mass_10 = hi > 0.0 ? weighted_mass(fam, t, 0.0, hi) : 0.0;
    out.per_param.push_back(rep);
  }
  if (out.per_param.size() >= 2) {
    const auto& first = out.per_param.front();
    const auto& last = out.per_param.back();
    out.mass_trend_ok = last.integrable &&
                        std::abs(last.total_mass - 1.0) <= std::abs(first.total_mass - 1.0) &&
                        std::abs(last.total_mass - 1.0) < 0.05;
    out.tail_trend_ok = last.tail_mass_05 <= first.tail_mass_05 && last.tail_mass_05 < 0.05;
  } else if (out.per_param.size() == 1) {
    out.mass_trend_ok = std::abs(out.per_param[0].total_mass - 1.0) < 0.05;
    out.tail_trend_ok = out.per_param[0].tail_mass_05 < 0.05;
  }
  return out;
}

}  // namespace nlf
