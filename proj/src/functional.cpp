#include "nlf/functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlf/constants.hpp"

namespace nlf {

const char* family_name(Family f) {
  switch (f) {
    case Family::BBM: return "bbm";
    case Family::BN: return "bn";
    case Family::BSVY: return "bsvy";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "bbm" || s == "BBM") return Family::BBM;
  if (s == "bn" || s == "BN") return Family::BN;
  if (s == "bsvy" || s == "BSVY") return Family::BSVY;
  throw std::invalid_argument("unknown family: " + s);
}

const char* engine_name(EngineKind e) {
  return e == EngineKind::Deterministic1d ? "deterministic-1d" : "monte-carlo";
}

EngineKind engine_from_string(const std::string& s) {
  if (s == "deterministic-1d" || s == "det" || s == "deterministic")
    return EngineKind::Deterministic1d;
  if (s == "monte-carlo" || s == "mc") return EngineKind::MonteCarlo;
  throw std::invalid_argument("unknown engine: " + s);
}

void FunctionalSpec::validate() const {
  if (p < 1.0) throw std::invalid_argument("FunctionalSpec: p must be >= 1");
  if (!(sweep > 0.0)) throw std::invalid_argument("FunctionalSpec: sweep parameter must be > 0");
  if (family == Family::BSVY && gamma == 0.0)
    throw std::invalid_argument("FunctionalSpec: gamma must be nonzero for the bsvy family");
  if (family == Family::BBM && !(radial_cut > 0.0))
    throw std::invalid_argument("FunctionalSpec: bbm radial cut r must be > 0");
  if (family == Family::BBM && !(sweep < 1.0 + 1e-12))
    throw std::invalid_argument("FunctionalSpec: bbm eps must lie in (0, 1]");
}

void IntegrationPlan::validate() const {
  if (outer_nodes < 2 || radial_nodes < 8)
    throw std::invalid_argument("IntegrationPlan: node counts too small");
  if (samples < 1 || strata < 1) throw std::invalid_argument("IntegrationPlan: bad MC budget");
  if (samples < strata) throw std::invalid_argument("IntegrationPlan: samples must be >= strata");
  if (h_min && h_max && !(*h_min < *h_max))
    throw std::invalid_argument("IntegrationPlan: explicit h_min must be < h_max");
  if (h_min && *h_min <= 0.0) throw std::invalid_argument("IntegrationPlan: h_min must be > 0");
}

namespace {

// Structural bound on the (x, sigma)-measure of events at radius h for
// fields with jumps: events need an interface within h of x, so the measure
// grows at most linearly in h with this constant.
double interface_constant(const ScalarField& u) {
  if (u.dim == 1) return 2.0 * static_cast<double>(std::max<std::size_t>(u.breakpoints.size(), 1));
  // Axis-aligned 2-D indicator data: perimeter from the declared TV.
  double per = 4.0;
  if (u.exact_seminorm) {
    if (auto e = u.exact_seminorm(1.0); e && !e->infinite) per = e->value;
  }
  return sphere_surface_measure(u.dim - 1) * per;
}

}  // namespace

Cutoffs auto_cutoffs(const ScalarField& u, const FunctionalSpec& spec, double tol) {
  spec.validate();
  Cutoffs c;
  if (spec.family == Family::BBM) {
    c.h_min = 0.0;
    c.h_max = spec.radial_cut;
    c.h_min_exact = c.h_max_exact = true;
    return c;
  }

  const double lambda = spec.sweep;
  const double beta = spec.beta();
  const double gamma = spec.gamma_eff();
  const double m2 = 2.0 * u.sup_norm;
  const double sphere = sphere_surface_measure(u.dim - 1);
  const double pairs_bound = 2.0 * sphere * u.support.volume();
  const double lam_p = std::pow(lambda, spec.p);

  // h_max side. Events need h^beta < |u(x)-u(y)| / lambda <= 2M/lambda.
  if (beta > 0.0) {
    c.h_max = m2 > 0.0 ? std::pow(m2 / lambda, 1.0 / beta) : 0.0;
    c.h_max_exact = true;
    if (beta > 1.0 && u.lipschitz && *u.lipschitz > 0.0) {
      // |Du| <= L h caps the quotient by L h^{1-beta}, decreasing for beta > 1.
      const double cap = std::pow(*u.lipschitz / lambda, 1.0 / (beta - 1.0));
      c.h_max = std::min(c.h_max, cap);
    }
  } else {
    // gamma <= -p < 0: the tail kernel mass converges; cut where the bound
    // drops below tol.
    const double scale = lam_p * pairs_bound / std::abs(gamma);
    c.h_max = scale > 0.0 ? std::pow(scale / tol, 1.0 / std::abs(gamma)) : 1.0;
    c.h_max = std::max(c.h_max, 1.0);
    c.tail_bound += scale * std::pow(c.h_max, gamma);
  }

  // h_min side.
  if (beta < 0.0) {
    c.h_min = m2 > 0.0 ? std::pow(m2 / lambda, 1.0 / beta) : 0.0;
    c.h_min_exact = true;
    return c;
  }
  if (beta < 1.0 && u.lipschitz) {
    if (*u.lipschitz == 0.0) {
      c.h_min = c.h_max;  // no events at all
      c.h_min_exact = true;
      return c;
    }
    c.h_min = std::pow(lambda / *u.lipschitz, 1.0 / (1.0 - beta));
    c.h_min_exact = true;
    c.h_min = std::min(c.h_min, c.h_max);
    return c;
  }
  if (gamma > 0.0) {
    // The head kernel mass h^{gamma-1} is integrable at 0: no cutoff needed.
    c.h_min = 0.0;
    c.h_min_exact = true;
    return c;
  }
  // Jumps with gamma <= 0: events near an interface occupy x-measure ~ C h,
  // so the head mass goes like h^{gamma+1}.
  if (gamma > -1.0) {
    const double cs = lam_p * interface_constant(u) / (gamma + 1.0);
    c.h_min = cs > 0.0 ? std::pow(tol / cs, 1.0 / (gamma + 1.0)) : 0.0;
    c.h_min = std::min(c.h_min, 0.5 * c.h_max);
    c.tail_bound += cs * std::pow(c.h_min, gamma + 1.0);
    return c;
  }
  // No finite cutoff at this tolerance; evaluation probes the head for
  // divergence.
  c.divergent_head = true;
  c.h_min = 0.0;
  return c;
}

}  // namespace nlf
