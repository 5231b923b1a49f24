#include "nlf/brute_types.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace nlf {

namespace {

long brute_budget() {
  if (const char* env = std::getenv("NLF_BRUTE_BUDGET")) {
    const long v = std::atol(env);
    if (v > 0) return v;
  }
  return 2000000000L;  // pair evaluations
}

Estimate brute_1d(const ScalarField& u, const FunctionalSpec& spec, int grid, double pad,
                  double max_sep) {
  const double lo = u.support.lo[0] - pad, hi = u.support.hi[0] + pad;
  const double w = (hi - lo) / grid;
  std::vector<double> vals(grid);
  for (int i = 0; i < grid; ++i) vals[i] = u(lo + (i + 0.5) * w);

  // Kernel and event threshold depend on the pair only through the offset.
  const double lam = spec.sweep;
  const double pp = spec.p;
  std::vector<double> kern(grid), thr(grid);
  if (spec.family == Family::BBM) {
    for (int k = 1; k < grid; ++k) {
      const double s = k * w;
      kern[k] = s < spec.radial_cut ? lam * std::pow(s, lam - 1.0 - pp) : 0.0;
    }
  } else {
    const double g = spec.gamma_eff();
    const double beta = spec.beta();
    for (int k = 1; k < grid; ++k) {
      const double s = k * w;
      kern[k] = std::pow(s, g - 1.0);
      thr[k] = lam * std::pow(s, beta);
    }
  }
  if (max_sep > 0.0)
    for (int k = 1; k < grid; ++k)
      if (k * w > max_sep) kern[k] = 0.0;

  double total = 0.0;
  long n = 0;
  if (spec.family == Family::BBM) {
    for (int i = 0; i < grid; ++i) {
      const double ui = vals[i];
      for (int k = 1; k < grid - i; ++k) {
        const double d = std::abs(ui - vals[i + k]);
        if (d != 0.0 && kern[k] != 0.0) total += std::pow(d, pp) * kern[k];
        ++n;
      }
    }
    total *= 2.0 * w * w;  // ordered pairs
  } else {
    for (int i = 0; i < grid; ++i) {
      const double ui = vals[i];
      for (int k = 1; k < grid - i; ++k) {
        if (std::abs(ui - vals[i + k]) > thr[k]) total += kern[k];
        ++n;
      }
    }
    total *= 2.0 * w * w * std::pow(lam, pp);
  }

  Estimate e;
  e.value = total;
  e.n_evaluations = n;
  e.spec = spec;
  return e;
}

Estimate brute_2d(const ScalarField& u, const FunctionalSpec& spec, int grid, double pad,
                  double max_sep) {
  const double lx = u.support.lo[0] - pad, hx = u.support.hi[0] + pad;
  const double ly = u.support.lo[1] - pad, hy = u.support.hi[1] + pad;
  const double wx = (hx - lx) / grid, wy = (hy - ly) / grid;
  std::vector<double> vals(static_cast<std::size_t>(grid) * grid);
  for (int ix = 0; ix < grid; ++ix)
    for (int iy = 0; iy < grid; ++iy) {
      const double ptv[2] = {lx + (ix + 0.5) * wx, ly + (iy + 0.5) * wy};
      vals[static_cast<std::size_t>(ix) * grid + iy] = u.eval(ptv);
    }

  const double lam = spec.sweep;
  const double pp = spec.p;
  const double g = spec.gamma_eff();
  const double beta = spec.beta();
  const bool bbm = spec.family == Family::BBM;
  // offset tables over (di, dj) with di >= 0
  std::vector<double> kern(static_cast<std::size_t>(grid) * (2 * grid + 1));
  std::vector<double> thr(kern.size());
  for (int di = 0; di < grid; ++di)
    for (int dj = -grid; dj <= grid; ++dj) {
      const std::size_t idx = static_cast<std::size_t>(di) * (2 * grid + 1) + (dj + grid);
      const double s = std::hypot(di * wx, dj * wy);
      if (s == 0.0 || (max_sep > 0.0 && s > max_sep)) {
        kern[idx] = 0.0;
        continue;
      }
      if (bbm) {
        kern[idx] = s < spec.radial_cut ? lam * std::pow(s, lam - 2.0 - pp) : 0.0;
      } else {
        kern[idx] = std::pow(s, g - 2.0);
        thr[idx] = lam * std::pow(s, beta);
      }
    }

  // Ordered pairs counted once with di > 0, or di = 0 and dj > 0; doubled.
  double total = 0.0;
  long n = 0;
  for (int ix = 0; ix < grid; ++ix)
    for (int iy = 0; iy < grid; ++iy) {
      const double ui = vals[static_cast<std::size_t>(ix) * grid + iy];
      for (int jx = ix; jx < grid; ++jx) {
        const int dj0 = jx == ix ? iy + 1 : 0;
        const std::size_t row = static_cast<std::size_t>(jx) * grid;
        const std::size_t krow = static_cast<std::size_t>(jx - ix) * (2 * grid + 1) + grid - iy;
        for (int jy = dj0; jy < grid; ++jy) {
          const double d = std::abs(ui - vals[row + jy]);
          ++n;
          if (bbm) {
            if (d != 0.0 && kern[krow + jy] != 0.0) total += std::pow(d, pp) * kern[krow + jy];
          } else {
            if (d > thr[krow + jy]) total += kern[krow + jy];
          }
        }
      }
    }
  total *= 2.0 * wx * wy * wx * wy;
  if (!bbm) total *= std::pow(lam, pp);

  Estimate e;
  e.value = total;
  e.n_evaluations = n;
  e.spec = spec;
  return e;
}

}  // namespace

Estimate brute_force_functional(const ScalarField& u, const FunctionalSpec& spec, int grid,
                                double box_pad, double max_separation) {
  spec.validate();
  if (grid < 2) throw std::invalid_argument("brute_force_functional: grid too small");
  if (!(box_pad >= 0.0)) throw std::invalid_argument("brute_force_functional: bad pad");
  if (u.dim == 1) {
    if (static_cast<long>(grid) * grid > brute_budget())
      throw BudgetError("brute_force_functional: 1-D pair budget exceeded");
    return brute_1d(u, spec, grid, box_pad, max_separation);
  }
  if (u.dim == 2) {
    if (grid > 80) throw BudgetError("brute_force_functional: 2-D grid capped at 80 per axis");
    return brute_2d(u, spec, grid, box_pad, max_separation);
  }
  throw std::invalid_argument("brute_force_functional: dim must be 1 or 2");
}

}  // namespace nlf
