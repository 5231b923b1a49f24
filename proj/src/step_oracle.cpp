#include "nlf/step_oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlf {

std::string StepOracleResult::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"regime\":\"";
  switch (regime) {
    case Regime::BetaPositive: os << "beta>0"; break;
    case Regime::BetaZero: os << "beta=0"; break;
    case Regime::BetaNegative: os << "beta<0"; break;
  }
  os << "\",\"value\":";
  if (infinite)
    os << "\"infinite\"";
  else
    os << value;
  os << ",\"beta\":" << beta << ",\"threshold_t\":" << threshold_t
     << ",\"inner_integral\":" << inner_integral << ",\"symmetry_factor\":" << symmetry_factor
     << ",\"branch\":\"" << branch << "\"}";
  return os.str();
}

StepOracleResult step_phi_lambda(double gamma, double p, double lambda) {
  if (gamma == 0.0) throw std::invalid_argument("step_phi_lambda: gamma must be nonzero");
  if (p < 1.0) throw std::invalid_argument("step_phi_lambda: p must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("step_phi_lambda: lambda must be > 0");

  StepOracleResult r;
  const double beta = 1.0 + gamma / p;
  r.beta = beta;
  const double lam_p = std::pow(lambda, p);

  if (beta == 0.0) {
    // |u(x)-u(y)| = 1 on separating pairs: all of them when lambda < 1.
    r.regime = StepOracleResult::Regime::BetaZero;
    if (lambda >= 1.0) {
      r.branch = "empty event";
      return r;
    }
    // gamma = -p <= -1: int_0^1 x^gamma dx diverges.
    r.infinite = true;
    r.branch = "divergent x-integral (gamma = -p <= -1)";
    return r;
  }

  const double t = std::pow(lambda, -1.0 / beta);
  r.threshold_t = t;

  if (beta > 0.0) {
    r.regime = StepOracleResult::Regime::BetaPositive;
    if (gamma <= -1.0) {
      // inner (t^g - x^g)/g ~ x^gamma/|gamma| near the jump: not integrable.
      r.infinite = true;
      r.branch = "divergent x-integral (gamma <= -1)";
      return r;
    }
    double inner;
    if (t <= 1.0) {
      // I = int_0^t (t^g - x^g)/g dx = t^{g+1}/(g+1)
      inner = std::pow(t, gamma + 1.0) / (gamma + 1.0);
      r.branch = "s<t, t<=1";
    } else {
      // I = int_0^1 (t^g - x^g)/g dx = t^g/g - 1/(g(g+1))
      inner = std::pow(t, gamma) / gamma - 1.0 / (gamma * (gamma + 1.0));
      r.branch = "s<t, t>1";
    }
    r.inner_integral = inner;
    r.value = 4.0 * lam_p * inner;
    return r;
  }

  // beta < 0: gamma < -p <= -1, condition s > t; the s-integral converges.
  r.regime = StepOracleResult::Regime::BetaNegative;
  const double ag = -gamma;  // |gamma|
  double inner;
  if (t >= 1.0) {
    // I = int_0^1 t^g/|g| dx
    inner = std::pow(t, gamma) / ag;
    r.branch = "s>t, t>=1";
  } else {
    // I = [t^{g+1} + int_t^1 x^g dx] / |g|, with gamma < -1 strictly here
    const double ag1 = -(gamma + 1.0);  // |gamma+1|
    const double tg1 = std::pow(t, gamma + 1.0);
    inner = (tg1 + (tg1 - 1.0) / ag1) / ag;
    r.branch = "s>t, t<1";
  }
  r.inner_integral = inner;
  r.value = 4.0 * lam_p * inner;
  return r;
}

}  // namespace nlf
