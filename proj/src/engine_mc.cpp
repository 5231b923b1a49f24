#include <algorithm>
#include <cmath>
#include <vector>

#include "nlf/constants.hpp"
#include "nlf/engine.hpp"
#include "nlf/radial_sampler.hpp"
#include "nlf/rng.hpp"

namespace nlf {

Estimate eval_deterministic_1d(const ScalarField& u, const FunctionalSpec& spec,
                               const IntegrationPlan& plan,
                               std::optional<std::pair<double, double>> domain);

namespace {

struct StratumStats {
  double estimate = 0.0;
  double se = 0.0;
};

}  // namespace

// Stratified estimator in the (x, sigma, h) representation: logarithmic
// strata in h, x uniform on the support box padded by the stratum's upper
// radius (events with both points outside the support do not exist, so the
// per-stratum padding is exact), sigma uniform on the half sphere with the
// ordered-pair integral recovered by doubling. Strata are reduced in fixed
// order; a given seed yields one result.
Estimate eval_monte_carlo(const ScalarField& u, const FunctionalSpec& spec,
                          const IntegrationPlan& plan) {
  Cutoffs cut = auto_cutoffs(u, spec, plan.tol);
  if (plan.h_min) {
    cut.h_min = *plan.h_min;
    cut.divergent_head = false;
  }
  if (plan.h_max) cut.h_max = *plan.h_max;

  Estimate e;
  e.spec = spec;
  e.plan = plan;
  e.tail_bound = cut.tail_bound;

  const double sphere = sphere_surface_measure(u.dim - 1);
  const double lam = spec.sweep;
  const double lam_p = std::pow(lam, spec.p);
  const double beta = spec.beta();
  const double gamma_rad = spec.family == Family::BBM ? spec.sweep : spec.gamma_eff();
  const bool bbm = spec.family == Family::BBM;

  double h_min = cut.h_min;
  int strata = plan.strata;
  bool head_stratum = false;  // integrable head [0, h_split) as its own stratum
  if (cut.divergent_head) {
    // No usable lower cutoff: probe extra decades and watch the low strata.
    h_min = cut.h_max * 1e-9;
    strata = std::max(strata, 24);
  } else if (!(h_min > 0.0)) {
    if (gamma_rad > 0.0) {
      h_min = cut.h_max * 1e-10;
      head_stratum = true;
    } else {
      h_min = cut.h_max * 1e-9;
    }
  }
  h_min = std::min(h_min, cut.h_max * 0.999);
  if (!(cut.h_max > 0.0) || !(h_min > 0.0) || u.sup_norm == 0.0) {
    return e;  // no events possible
  }

  const double log_lo = std::log(h_min), log_hi = std::log(cut.h_max);
  const long per_stratum = std::max<long>(plan.samples / (strata + (head_stratum ? 1 : 0)), 8);

  std::vector<StratumStats> stats(strata);
  double value = 0.0, var = 0.0;
  long evals = 0;
  for (int s = head_stratum ? -1 : 0; s < strata; ++s) {
    const double a =
        s < 0 ? 0.0 : std::exp(log_lo + (log_hi - log_lo) * s / strata);
    const double b = s < 0 ? h_min
                     : s + 1 == strata
                         ? cut.h_max
                         : std::exp(log_lo + (log_hi - log_lo) * (s + 1) / strata);
    RadialSampler sampler(gamma_rad, a, b);
    Rng rng(plan.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(s + 2)));
    // per-stratum padded box
    Box box = u.support.padded(b);
    const double vol = box.volume();
    // the eps prefactor of the BBM kernel is not part of the sampling density
    const double scale = sphere * vol * sampler.weight() * (bbm ? lam : 1.0);

    double sum = 0.0, sum2 = 0.0;
    for (long i = 0; i < per_stratum; ++i) {
      const double h = sampler.sample(rng);
      double x[2], y[2], dir[2];
      for (int d = 0; d < u.dim; ++d) x[d] = rng.uniform(box.lo[d], box.hi[d]);
      if (u.dim == 1) {
        dir[0] = 1.0;
      } else {
        const double th = M_PI * rng.uniform();
        dir[0] = std::cos(th);
        dir[1] = std::sin(th);
      }
      for (int d = 0; d < u.dim; ++d) y[d] = x[d] + h * dir[d];
      double c = 0.0;
      if (bbm) {
        // The eps-mass concentrates at h -> 0 where u(y) - u(x) cancels in
        // floating point for continuous u; switch to the directional
        // derivative (or a wider baseline) there. Piecewise-constant values
        // subtract exactly and keep the plain quotient.
        double quot;
        const double floor_h = 1e-7 * (1.0 + std::abs(x[0]));
        const bool exact_sub = u.cls == FieldClass::PiecewiseConstant;
        if (h >= floor_h || exact_sub) {
          quot = std::abs(u.eval(y) - u.eval(x)) / h;
        } else if (u.grad_fn) {
          double grad[2] = {0.0, 0.0};
          u.grad_fn(x, grad);
          quot = 0.0;
          for (int d = 0; d < u.dim; ++d) quot += grad[d] * dir[d];
          quot = std::abs(quot);
        } else {
          for (int d = 0; d < u.dim; ++d) y[d] = x[d] + floor_h * dir[d];
          quot = std::abs(u.eval(y) - u.eval(x)) / floor_h;
        }
        evals += 2;
        if (quot != 0.0) c = std::pow(quot, spec.p);
      } else {
        const double du = std::abs(u.eval(y) - u.eval(x));
        evals += 2;
        if (du > lam * std::pow(h, beta)) c = lam_p;
      }
      sum += c;
      sum2 += c * c;
    }
    const double mean = sum / per_stratum;
    const double mvar = std::max(0.0, sum2 / per_stratum - mean * mean) / per_stratum;
    const double est = scale * mean;
    const double se = scale * std::sqrt(mvar);
    if (s >= 0) stats[s] = {est, se};
    value += est;
    var += se * se;
  }

  e.value = value;
  e.error = std::sqrt(var);
  e.n_evaluations = evals;

  // Divergence probe: without a usable lower cutoff, non-decaying mass in
  // the lowest strata marks a divergent head.
  if (cut.divergent_head && strata >= 4) {
    int streak = 0;
    for (int s = 1; s < std::min(strata, 8); ++s) {
      const double prev = stats[s - 1].estimate, curr = stats[s].estimate;
      const double noise = 3.0 * (stats[s - 1].se + stats[s].se);
      if (prev > noise && curr > noise && prev >= 0.8 * curr) ++streak;
      else streak = 0;
      if (streak >= 3) {
        e.diverged = true;
        break;
      }
    }
  }
  return e;
}

Estimate eval_functional(const ScalarField& u, const FunctionalSpec& spec,
                         const IntegrationPlan& plan,
                         std::optional<std::pair<double, double>> domain) {
  spec.validate();
  plan.validate();
  if (plan.engine == EngineKind::Deterministic1d) {
    if (u.dim != 1)
      throw std::invalid_argument("eval_functional: deterministic engine requires dim = 1");
    return eval_deterministic_1d(u, spec, plan, domain);
  }
  if (domain)
    throw std::invalid_argument("eval_functional: domain restriction is deterministic-only");
  if (u.dim > 2) throw std::invalid_argument("eval_functional: dim must be 1 or 2");
  return eval_monte_carlo(u, spec, plan);
}

BnBsvyReport bn_equals_bsvy_check(const ScalarField& u, double p, double delta,
                                  const IntegrationPlan& plan) {
  FunctionalSpec bn;
  bn.family = Family::BN;
  bn.p = p;
  bn.sweep = delta;
  FunctionalSpec bsvy;
  bsvy.family = Family::BSVY;
  bsvy.p = p;
  bsvy.gamma = -p;
  bsvy.sweep = delta;

  BnBsvyReport rep;
  rep.bn = eval_functional(u, bn, plan);
  rep.bsvy = eval_functional(u, bsvy, plan);
  rep.bitwise_equal = rep.bn.value == rep.bsvy.value && rep.bn.error == rep.bsvy.error &&
                      rep.bn.diverged == rep.bsvy.diverged;
  const double tol = rep.bn.error + rep.bsvy.error + 1e-12;
  rep.agree_within_error = std::abs(rep.bn.value - rep.bsvy.value) <= tol;
  return rep;
}

}  // namespace nlf
