#pragma once

#include <optional>
#include <vector>

#include "nlf/engine.hpp"

namespace nlf {

enum class SweepDirection { TowardZero, TowardInfinity };

struct Ladder {
  double start = 0.2;
  double ratio = 0.5;  // applied multiplicatively toward the limit
  int count = 6;
  SweepDirection direction = SweepDirection::TowardZero;

  std::vector<double> values() const;
};

struct FitResult {
  double limit = 0.0;         // extrapolated A of value ~ A + B s^theta
  double uncertainty = 0.0;
  double rate = 0.0;          // theta
  double rate_se = 0.0;
  bool stable = false;        // false: limit downgraded to the last ladder value
  double coefficient = 0.0;   // B
};

// Fits value ~ A + B s^theta to the last k points by least squares on the
// logs of the successive differences (geometric ladders make the differences
// geometric too).
FitResult fit_limit(const std::vector<double>& s, const std::vector<double>& v, int last_k = 4);

struct SweepResult {
  Ladder ladder;
  std::vector<double> params;
  std::vector<Estimate> estimates;
  FitResult fit;
  bool diverged = false;
  std::optional<double> reference_target;
  std::optional<double> relative_gap;
  // log-log slope of value vs parameter over the tail of the ladder
  double loglog_slope = 0.0;
  // extrapolated limit lies within the hull of the last three estimates
  // widened by their errors; a violation is flagged, not hidden
  bool limit_in_hull = true;
};

// Evaluates the functional along the ladder (per-point seeds derived as
// seed xor point index), extrapolates the limit, and compares with the
// optional reference target.
SweepResult run_sweep(const ScalarField& u, FunctionalSpec spec, const Ladder& ladder,
                      const IntegrationPlan& plan,
                      std::optional<double> target = std::nullopt);

}  // namespace nlf
