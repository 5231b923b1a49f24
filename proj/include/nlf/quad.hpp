#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace nlf {

// Gauss-Legendre rule on [-1, 1]. Nodes found by Newton iteration on P_n;
// cached per order.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;

  explicit GaussRule(int n);

  template <class F> double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(mid + half * x[i]);
    return s * half;
  }
};

const GaussRule& gauss_rule(int n);

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int nodes_per_panel);

// Composite rule on geometrically spaced panels between a and b (a < b, both
// positive spacings measured from `origin`); used for integrands with a
// power-law singularity at `origin`.
double integrate_graded(const std::function<double(double)>& f, double origin, double d_lo,
                        double d_hi, int sign, int nodes_per_panel);

// Tanh-sinh rule on (a, b); converges at machine precision even with
// algebraic endpoint singularities. `level` halves the step per increment.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           int level = 7);

}  // namespace nlf
