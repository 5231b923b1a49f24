#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlf {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double length(int i) const { return hi[i] - lo[i]; }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= length(i);
    return v;
  }
  bool contains(const double* x) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
  Box padded(double pad) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
      b.lo[i] -= pad;
      b.hi[i] += pad;
    }
    return b;
  }
};

enum class FieldClass { Smooth, PiecewiseSmooth1d, PiecewiseConstant };

const char* field_class_name(FieldClass c);

// Outcome of an exact seminorm lookup; `infinite` marks fields outside
// W^{1,p} (p > 1 on discontinuous data).
struct ExactSeminorm {
  bool infinite = false;
  double value = 0.0;
};

// A test scalar field u: R^N -> R with compact support. Immutable after
// construction; safe to share across threads.
struct ScalarField {
  std::string id;
  int dim = 1;
  FieldClass cls = FieldClass::Smooth;
  Box support;
  std::function<double(const double*)> eval_fn;
  std::function<void(const double*, double*)> grad_fn;  // required when smooth
  std::vector<double> breakpoints;                      // 1-D discontinuities/kinks
  std::optional<double> lipschitz;
  double sup_norm = 0.0;
  double tail_mass = 0.0;  // mass truncated by the support box, if any
  std::function<std::optional<ExactSeminorm>(double p)> exact_seminorm;

  double eval(const double* x) const { return eval_fn(x); }
  double operator()(double x) const { return eval_fn(&x); }
  double operator()(double x, double y) const {
    const double p[2] = {x, y};
    return eval_fn(p);
  }
  bool has_gradient() const { return static_cast<bool>(grad_fn); }
  // Values immediately left/right of a 1-D breakpoint.
  double jump_at(double b) const;
};

// Built-in corpus. Identifiers: step1d, cube2d, gauss1d, tent1d, const.
std::vector<ScalarField> corpus_catalog();
ScalarField find_field(const std::string& id);
std::string corpus_catalog_json();

// Piecewise-constant field equal to u(cell center) on each dyadic cube of
// side 2^-k meeting the support box. Cell budget guards k (override with
// NLF_MAX_QUANT_CELLS).
ScalarField quantize_dyadic(const ScalarField& u, int k);

ScalarField scale_amplitude(const ScalarField& u, double c);
ScalarField translate(const ScalarField& u, double shift);
ScalarField dilate(const ScalarField& u, double r);  // u_r(x) = u(x/r)
ScalarField clamp_field(const ScalarField& u, double a);

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nlf
