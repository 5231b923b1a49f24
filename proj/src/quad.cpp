#include "nlf/quad.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace nlf {

GaussRule::GaussRule(int n) {
  if (n < 1) throw std::invalid_argument("GaussRule: order must be >= 1");
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n(z).
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

const GaussRule& gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, GaussRule(n)).first;
  return it->second;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int nodes_per_panel) {
  const GaussRule& rule = gauss_rule(nodes_per_panel);
  double s = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double pa = a + (b - a) * k / panels;
    const double pb = a + (b - a) * (k + 1) / panels;
    s += rule.integrate(f, pa, pb);
  }
  return s;
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           int level) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double h = 1.0 / static_cast<double>(1 << level);
  const int k_max = static_cast<int>(std::ceil(3.9 / h));
  double s = 0.0;
  for (int k = -k_max; k <= k_max; ++k) {
    const double t = k * h;
    const double u = 0.5 * M_PI * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = 0.5 * M_PI * std::cosh(t) / (ch * ch);
    if (!(w > 1e-300)) continue;
    const double x = mid + half * std::tanh(u);
    if (x <= a || x >= b) continue;
    s += w * f(x);
  }
  return s * half * h;
}

double integrate_graded(const std::function<double(double)>& f, double origin, double d_lo,
                        double d_hi, int sign, int nodes_per_panel) {
  if (!(d_lo > 0.0) || !(d_hi > d_lo)) return 0.0;
  const GaussRule& rule = gauss_rule(nodes_per_panel);
  double s = 0.0;
  double d = d_lo;
  while (d < d_hi) {
    const double d2 = std::min(2.0 * d, d_hi);
    const double a = origin + sign * d, b = origin + sign * d2;
    s += sign > 0 ? rule.integrate(f, a, b) : rule.integrate(f, b, a);
    d = d2;
  }
  return s;
}

}  // namespace nlf
