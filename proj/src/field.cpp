#include "nlf/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <sstream>

#include "json.hpp"

namespace nlf {

const char* field_class_name(FieldClass c) {
  switch (c) {
    case FieldClass::Smooth: return "smooth";
    case FieldClass::PiecewiseSmooth1d: return "piecewise-smooth-1d";
    case FieldClass::PiecewiseConstant: return "piecewise-constant";
  }
  return "?";
}

double ScalarField::jump_at(double b) const {
  const double eps = 1e-9 * std::max(1.0, std::abs(b));
  return (*this)(b + eps) - (*this)(b - eps);
}

namespace {

ScalarField make_step1d() {
  ScalarField f;
  f.id = "step1d";
  f.dim = 1;
  f.cls = FieldClass::PiecewiseConstant;
  f.support = {{0.0}, {1.0}};
  f.eval_fn = [](const double* x) { return (x[0] > 0.0 && x[0] < 1.0) ? 1.0 : 0.0; };
  f.breakpoints = {0.0, 1.0};
  f.sup_norm = 1.0;
  f.exact_seminorm = [](double p) -> std::optional<ExactSeminorm> {
    if (p == 1.0) return ExactSeminorm{false, 2.0};
    return ExactSeminorm{true, 0.0};
  };
  return f;
}

ScalarField make_cube2d() {
  ScalarField f;
  f.id = "cube2d";
  f.dim = 2;
  f.cls = FieldClass::PiecewiseConstant;
  f.support = {{0.0, 0.0}, {1.0, 1.0}};
  f.eval_fn = [](const double* x) {
    return (x[0] > 0.0 && x[0] < 1.0 && x[1] > 0.0 && x[1] < 1.0) ? 1.0 : 0.0;
  };
  f.sup_norm = 1.0;
  f.exact_seminorm = [](double p) -> std::optional<ExactSeminorm> {
    if (p == 1.0) return ExactSeminorm{false, 4.0};  // perimeter of the unit square
    return ExactSeminorm{true, 0.0};
  };
  return f;
}

ScalarField make_gauss1d() {
  ScalarField f;
  f.id = "gauss1d";
  f.dim = 1;
  f.cls = FieldClass::Smooth;
  f.support = {{-8.0}, {8.0}};
  f.eval_fn = [](const double* x) {
    return (x[0] >= -8.0 && x[0] <= 8.0) ? std::exp(-x[0] * x[0]) : 0.0;
  };
  f.grad_fn = [](const double* x, double* g) {
    g[0] = (x[0] >= -8.0 && x[0] <= 8.0) ? -2.0 * x[0] * std::exp(-x[0] * x[0]) : 0.0;
  };
  f.sup_norm = 1.0;
  // sup |u'| = sqrt(2) e^{-1/2}, rounded up so the bound stays valid.
  f.lipschitz = 0.857697;
  // truncated tail: 2 * integral_8^inf e^{-x^2} dx = sqrt(pi) erfc(8)
  f.tail_mass = std::sqrt(M_PI) * std::erfc(8.0);
  f.exact_seminorm = [](double p) -> std::optional<ExactSeminorm> {
    if (p == 1.0) return ExactSeminorm{false, 2.0};
    if (p == 2.0) return ExactSeminorm{false, std::sqrt(M_PI / 2.0)};
    return std::nullopt;  // fall back to quadrature
  };
  return f;
}

ScalarField make_tent1d() {
  ScalarField f;
  f.id = "tent1d";
  f.dim = 1;
  f.cls = FieldClass::PiecewiseSmooth1d;
  f.support = {{0.0}, {1.0}};
  f.eval_fn = [](const double* x) {
    if (x[0] <= 0.0 || x[0] >= 1.0) return 0.0;
    return x[0] < 0.5 ? 2.0 * x[0] : 2.0 * (1.0 - x[0]);
  };
  f.breakpoints = {0.0, 0.5, 1.0};
  f.lipschitz = 2.0;
  f.sup_norm = 1.0;
  f.exact_seminorm = [](double p) -> std::optional<ExactSeminorm> {
    // |u'| = 2 on a set of measure 1
    return ExactSeminorm{false, std::pow(2.0, p)};
  };
  return f;
}

ScalarField make_const() {
  // The zero field: the only constant compatible with compact support.
  ScalarField f;
  f.id = "const";
  f.dim = 1;
  f.cls = FieldClass::Smooth;
  f.support = {{0.0}, {1.0}};
  f.eval_fn = [](const double*) { return 0.0; };
  f.grad_fn = [](const double*, double* g) { g[0] = 0.0; };
  f.lipschitz = 0.0;
  f.sup_norm = 0.0;
  f.exact_seminorm = [](double) -> std::optional<ExactSeminorm> {
    return ExactSeminorm{false, 0.0};
  };
  return f;
}

long quant_cell_budget() {
  if (const char* env = std::getenv("NLF_MAX_QUANT_CELLS")) {
    const long v = std::atol(env);
    if (v > 0) return v;
  }
  return 1L << 22;
}

}  // namespace

std::vector<ScalarField> corpus_catalog() {
  return {make_step1d(), make_cube2d(), make_gauss1d(), make_tent1d(), make_const()};
}

ScalarField find_field(const std::string& id) {
  for (auto& f : corpus_catalog())
    if (f.id == id) return f;
  throw std::invalid_argument("unknown field identifier: " + id);
}

std::string corpus_catalog_json() {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : corpus_catalog()) {
    nlohmann::json j;
    j["id"] = f.id;
    j["dim"] = f.dim;
    j["class_tag"] = field_class_name(f.cls);
    j["support_lo"] = f.support.lo;
    j["support_hi"] = f.support.hi;
    j["sup_norm"] = f.sup_norm;
    if (f.lipschitz) j["lipschitz_bound"] = *f.lipschitz;
    nlohmann::json sem = nlohmann::json::object();
    for (double p : {1.0, 2.0}) {
      if (auto e = f.exact_seminorm ? f.exact_seminorm(p) : std::nullopt) {
        sem["p" + std::to_string(static_cast<int>(p))] =
            e->infinite ? nlohmann::json("infinite") : nlohmann::json(e->value);
      }
    }
    j["exact_seminorms"] = sem;
    arr.push_back(j);
  }
  return arr.dump(2);
}

ScalarField quantize_dyadic(const ScalarField& u, int k) {
  if (k < 0) throw std::invalid_argument("quantize_dyadic: k must be >= 0");
  const double h = std::ldexp(1.0, -k);
  const int dim = u.dim;

  // Snap the support box outward to the dyadic lattice.
  std::vector<long> cell_lo(dim), cell_hi(dim);
  long cells = 1;
  for (int i = 0; i < dim; ++i) {
    cell_lo[i] = static_cast<long>(std::floor(u.support.lo[i] / h));
    cell_hi[i] = static_cast<long>(std::ceil(u.support.hi[i] / h));
    if (cell_hi[i] == cell_lo[i]) ++cell_hi[i];
    cells *= cell_hi[i] - cell_lo[i];
    if (cells > quant_cell_budget())
      throw BudgetError("quantize_dyadic: cell count exceeds budget");
  }

  ScalarField q;
  q.id = u.id + "_q" + std::to_string(k);
  q.dim = dim;
  q.cls = FieldClass::PiecewiseConstant;
  q.support.lo.resize(dim);
  q.support.hi.resize(dim);
  for (int i = 0; i < dim; ++i) {
    q.support.lo[i] = cell_lo[i] * h;
    q.support.hi[i] = cell_hi[i] * h;
  }
  q.sup_norm = u.sup_norm;

  if (dim == 1) {
    const long n = cell_hi[0] - cell_lo[0];
    auto vals = std::make_shared<std::vector<double>>(n);
    for (long c = 0; c < n; ++c) {
      const double center = (cell_lo[0] + c + 0.5) * h;
      (*vals)[c] = u(center);
    }
    const double lo = q.support.lo[0];
    q.eval_fn = [vals, lo, h, n](const double* x) {
      const double t = (x[0] - lo) / h;
      if (t <= 0.0 || t >= static_cast<double>(n)) return 0.0;
      return (*vals)[static_cast<long>(t)];
    };
    q.breakpoints.resize(n + 1);
    for (long c = 0; c <= n; ++c) q.breakpoints[c] = (cell_lo[0] + c) * h;
  } else if (dim == 2) {
    const long nx = cell_hi[0] - cell_lo[0], ny = cell_hi[1] - cell_lo[1];
    auto vals = std::make_shared<std::vector<double>>(nx * ny);
    for (long cx = 0; cx < nx; ++cx)
      for (long cy = 0; cy < ny; ++cy) {
        const double c[2] = {(cell_lo[0] + cx + 0.5) * h, (cell_lo[1] + cy + 0.5) * h};
        (*vals)[cx * ny + cy] = u.eval(c);
      }
    const double lx = q.support.lo[0], ly = q.support.lo[1];
    q.eval_fn = [vals, lx, ly, h, nx, ny](const double* x) {
      const double tx = (x[0] - lx) / h, ty = (x[1] - ly) / h;
      if (tx <= 0.0 || tx >= static_cast<double>(nx) || ty <= 0.0 ||
          ty >= static_cast<double>(ny))
        return 0.0;
      return (*vals)[static_cast<long>(tx) * ny + static_cast<long>(ty)];
    };
  } else {
    throw std::invalid_argument("quantize_dyadic: dim > 2 not supported");
  }
  return q;
}

ScalarField scale_amplitude(const ScalarField& u, double c) {
  ScalarField f = u;
  f.id = u.id + "_x" + std::to_string(c);
  auto base = u.eval_fn;
  f.eval_fn = [base, c](const double* x) { return c * base(x); };
  if (u.grad_fn) {
    auto g = u.grad_fn;
    const int dim = u.dim;
    f.grad_fn = [g, c, dim](const double* x, double* out) {
      g(x, out);
      for (int i = 0; i < dim; ++i) out[i] *= c;
    };
  }
  f.sup_norm = std::abs(c) * u.sup_norm;
  if (u.lipschitz) f.lipschitz = std::abs(c) * *u.lipschitz;
  const auto exact = u.exact_seminorm;
  f.exact_seminorm = [exact, c](double p) -> std::optional<ExactSeminorm> {
    if (!exact) return std::nullopt;
    auto e = exact(p);
    if (!e || e->infinite) return e;
    return ExactSeminorm{false, std::pow(std::abs(c), p) * e->value};
  };
  return f;
}

ScalarField translate(const ScalarField& u, double shift) {
  if (u.dim != 1) throw std::invalid_argument("translate: 1-D only");
  ScalarField f = u;
  f.id = u.id + "_shift";
  auto base = u.eval_fn;
  f.eval_fn = [base, shift](const double* x) {
    const double y = x[0] - shift;
    return base(&y);
  };
  if (u.grad_fn) {
    auto g = u.grad_fn;
    f.grad_fn = [g, shift](const double* x, double* out) {
      const double y = x[0] - shift;
      g(&y, out);
    };
  }
  f.support.lo[0] += shift;
  f.support.hi[0] += shift;
  for (auto& b : f.breakpoints) b += shift;
  return f;
}

ScalarField dilate(const ScalarField& u, double r) {
  if (u.dim != 1) throw std::invalid_argument("dilate: 1-D only");
  if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
  ScalarField f = u;
  f.id = u.id + "_dilate";
  auto base = u.eval_fn;
  f.eval_fn = [base, r](const double* x) {
    const double y = x[0] / r;
    return base(&y);
  };
  if (u.grad_fn) {
    auto g = u.grad_fn;
    f.grad_fn = [g, r](const double* x, double* out) {
      const double y = x[0] / r;
      g(&y, out);
      out[0] /= r;
    };
  }
  f.support.lo[0] *= r;
  f.support.hi[0] *= r;
  for (auto& b : f.breakpoints) b *= r;
  if (u.lipschitz) f.lipschitz = *u.lipschitz / r;
  f.exact_seminorm = nullptr;
  return f;
}

ScalarField clamp_field(const ScalarField& u, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("clamp_field: bound must be positive");
  ScalarField f = u;
  f.id = u.id + "_clamp";
  auto base = u.eval_fn;
  f.eval_fn = [base, a](const double* x) {
    return std::min(std::max(base(x), -a), a);
  };
  f.grad_fn = nullptr;
  if (u.cls == FieldClass::Smooth) f.cls = FieldClass::PiecewiseSmooth1d;
  f.sup_norm = std::min(u.sup_norm, a);
  f.exact_seminorm = nullptr;
  return f;
}

}  // namespace nlf
