#pragma once

// Power-law convergence analysis over the strip count: Aitken/Richardson
// extrapolation on a geometric ladder, fitted order, and per-step local
// slopes for log-log plots.

#include <utility>
#include <vector>

namespace imspekit {

struct ConvergenceSeries {
  // (n_int, value) samples; sorted internally by n_int.
  std::vector<std::pair<int, double>> samples;
};

struct ConvergenceEstimate {
  double limit = 0.0;
  double order = 0.0;       // fitted p in |v(n) - limit| ~ n^-p
  double residual = 0.0;    // change of the limit estimate under the ladder
  std::vector<double> local_slopes;  // slopes of log|v - limit| vs log n
  bool below_noise_floor = false;    // tail differences were at roundoff
};

/// Aitken extrapolation on the last three samples of a geometric ladder.
/// Requires >= 3 samples with a common step ratio. When four or more
/// samples are present the residual is the change of the limit between the
/// final and the penultimate sample triple; with exactly three it is the
/// magnitude of the extrapolation correction.
///
/// noise_floor is the absolute level below which tail differences are
/// indistinguishable from evaluation noise (e.g. linear-solve roundoff
/// amplified by the condition number); a tail at or below it counts as
/// converged instead of non-monotone.
ConvergenceEstimate extrapolate(const ConvergenceSeries& series,
                                double noise_floor = 0.0);

/// Slope of log|v - reference_limit| vs log n_int between consecutive samples.
std::vector<double> local_slopes(const ConvergenceSeries& series,
                                 double reference_limit);

}  // namespace imspekit
