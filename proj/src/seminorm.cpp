#include "nlf/seminorm.hpp"

#include <cmath>
#include <stdexcept>

#include "nlf/quad.hpp"

namespace nlf {

namespace {

double grad_norm_pow(const ScalarField& u, const double* x, double p) {
  double g[2] = {0.0, 0.0};
  u.grad_fn(x, g);
  double n2 = 0.0;
  for (int i = 0; i < u.dim; ++i) n2 += g[i] * g[i];
  return std::pow(std::sqrt(n2), p);
}

double pc_jump_mass(const ScalarField& u) {
  // p = 1 on piecewise-constant data: sum of |jump| * interface measure.
  if (u.dim == 1) {
    double tv = 0.0;
    for (double b : u.breakpoints) tv += std::abs(u.jump_at(b));
    return tv;
  }
  // Axis-aligned 2-D piecewise-constant data: scan cell interfaces on a fine
  // lattice aligned with the field's own structure is not available here, so
  // rely on the declared exact value.
  throw std::invalid_argument(
      "seminorm: 2-D piecewise-constant fields need a declared exact value");
}

}  // namespace

double seminorm_numeric(const ScalarField& u, double p) {
  if (p < 1.0) throw std::invalid_argument("seminorm: p must be >= 1");
  if (u.cls == FieldClass::PiecewiseConstant) {
    if (p > 1.0)
      throw std::invalid_argument(
          "seminorm_numeric: p > 1 on piecewise-constant data has no finite quadrature");
    return pc_jump_mass(u);
  }
  if (u.dim == 1) {
    if (u.grad_fn) {
      auto f = [&](double x) { return grad_norm_pow(u, &x, p); };
      // integrate piecewise between breakpoints
      std::vector<double> cuts = {u.support.lo[0]};
      for (double b : u.breakpoints)
        if (b > cuts.back()) cuts.push_back(b);
      if (u.support.hi[0] > cuts.back()) cuts.push_back(u.support.hi[0]);
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        s += integrate_composite(f, cuts[i], cuts[i + 1], 64, 16);
      return s;
    }
    // Piecewise-linear data without a gradient map: slopes between breakpoints.
    double s = 0.0;
    const auto& bp = u.breakpoints;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const double a = bp[i], b = bp[i + 1];
      const double slope = (u(b - 1e-9 * (b - a)) - u(a + 1e-9 * (b - a))) / ((b - a) * (1 - 2e-9));
      s += std::pow(std::abs(slope), p) * (b - a);
    }
    return s;
  }
  if (u.dim == 2 && u.grad_fn) {
    auto rule = gauss_rule(16);
    double s = 0.0;
    const int panels = 32;
    const Box& B = u.support;
    for (int ix = 0; ix < panels; ++ix)
      for (int iy = 0; iy < panels; ++iy) {
        const double ax = B.lo[0] + B.length(0) * ix / panels;
        const double bx = B.lo[0] + B.length(0) * (ix + 1) / panels;
        const double ay = B.lo[1] + B.length(1) * iy / panels;
        const double by = B.lo[1] + B.length(1) * (iy + 1) / panels;
        for (std::size_t i = 0; i < rule.x.size(); ++i)
          for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double x[2] = {0.5 * (ax + bx) + 0.5 * (bx - ax) * rule.x[i],
                                 0.5 * (ay + by) + 0.5 * (by - ay) * rule.x[j]};
            s += rule.w[i] * rule.w[j] * grad_norm_pow(u, x, p) * 0.25 * (bx - ax) * (by - ay);
          }
      }
    return s;
  }
  throw std::invalid_argument("seminorm_numeric: no gradient available");
}

SeminormValue seminorm(const ScalarField& u, double p) {
  if (p < 1.0) throw std::invalid_argument("seminorm: p must be >= 1");
  SeminormValue out;
  out.p = p;
  if (u.exact_seminorm) {
    if (auto e = u.exact_seminorm(p)) {
      out.infinite = e->infinite;
      out.value = e->value;
      out.provenance = Provenance::ExactClosedForm;
      return out;
    }
  }
  if (u.cls == FieldClass::PiecewiseConstant && p > 1.0) {
    out.infinite = true;
    out.provenance = Provenance::ExactClosedForm;
    return out;
  }
  out.value = seminorm_numeric(u, p);
  out.provenance = Provenance::NumericQuadrature;
  return out;
}

}  // namespace nlf
