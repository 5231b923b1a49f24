#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nlf {

// K_{N,p} = integral over S^{N-1} of |e . sigma|^p, independent of e.
// S^0 carries counting measure, so K_{1,p} = 2.
struct SphereConstant {
  int dim = 1;
  double p = 1.0;
  double value = 0.0;
  enum class Method { ClosedForm, Reduced1dQuadrature } method = Method::ClosedForm;
};

SphereConstant sphere_constant(int dim, double p);

// Surface measure of S^m (m >= 0; |S^0| = 2 by the counting convention).
double sphere_surface_measure(int m);

// Radial kernel family rho_t(r) with enough metadata to integrate the
// r^{N-1}-weighted mass stably. `log_weighted` evaluates rho_t(e^s) e^{sN}
// directly in log-radius, which keeps power-law kernels finite.
struct MollifierFamily {
  std::string name;
  int dim = 1;
  std::function<double(double t, double s)> log_weighted;
  double support_log_hi = 0.0;  // kernel vanishes for log r > this
};

MollifierFamily bbm_mollifier_family(int dim);

struct MollifierReport {
  double t = 0.0;
  double total_mass = 0.0;
  double tail_mass_01 = 0.0;
  double tail_mass_05 = 0.0;
  double tail_mass_10 = 0.0;
  bool integrable = true;
};

struct MollifierCheck {
  std::vector<MollifierReport> per_param;
  bool mass_trend_ok = false;  // total mass -> 1 along the family
  bool tail_trend_ok = false;  // tail mass -> 0 along the family
};

// Params ordered from least to most concentrated.
MollifierCheck mollifier_check(const MollifierFamily& fam, const std::vector<double>& params);

}  // namespace nlf
