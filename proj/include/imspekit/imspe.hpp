#pragma once

// The IMSPE objective: 1 - tr(L^-1 R) for any design over a rectangle or
// the unit disk, the cheap closed-form reductions for n = 1 and the
// symmetric n = 2 design, strip-count extrapolation, and the twin-point
// delta -> 0 limit machinery.
//
// Evaluations escalate through a precision ladder (double -> 50 -> 100 ->
// 160 decimal digits) driven by the condition number of the covariance
// matrix, so near-twin designs stay accurate without the caller doing
// anything.

#include <functional>
#include <variant>
#include <vector>

#include "imspekit/convergence.hpp"
#include "imspekit/design.hpp"
#include "imspekit/rmatrix.hpp"

namespace imspekit {

using Domain = std::variant<RectDomain, DiskSpec>;

struct ImspeValue {
  double value = 0.0;
  int n_int_used = 0;        // 0 for rectangle domains
  Method method_used = Method::C;
  double cond_estimate = 0.0;  // 1-norm condition estimate of V
  int digits_used = 0;         // 0 = double
  // values in [1, 2) are legitimate for sparse eccentric designs but worth
  // surfacing; values outside (0, 2) throw instead
  bool within_unit_interval = true;
};

/// Strip-count doubling ladder for disk evaluations.
struct LadderSpec {
  int start = 16;
  int stop = 1024;

  void validate() const {
    if (start < 2 || start % 2 != 0 || stop < start) {
      throw DomainError("ladder must start at an even n_int >= 2");
    }
  }
  std::vector<int> rungs() const {
    validate();
    std::vector<int> r;
    for (int n = start; n <= stop; n *= 2) r.push_back(n);
    return r;
  }
};

/// Precision rung (decimal digits) required for a covariance condition
/// number; 0 means double. Escalates whenever fewer than 8 digits of
/// headroom would remain.
int required_digits(double cond);

/// Condition estimate of V at a given precision rung.
double cov_condition(const Design& d, const Hyperparameters& h, int digits);

/// Absolute noise floor of a single IMSPE evaluation for this design
/// (condition number times the working precision, with a safety margin);
/// feed it to extrapolate() so a strip series that has converged down to
/// solver roundoff is not mistaken for a non-convergent one.
double imspe_noise_floor(const Design& d, const Hyperparameters& h,
                         int forced_digits = -1);

/// Single evaluation of IMSPE = 1 - tr(L^-1 R).
/// forced_digits: -1 = auto escalation, otherwise one of {0, 50, 100, 160}.
ImspeValue imspe(const Design& d, const Hyperparameters& h, const Domain& dom,
                 int forced_digits = -1);

/// Ladder of disk evaluations at each rung of the doubling ladder.
ConvergenceSeries imspe_series(const Design& d, const Hyperparameters& h,
                               Method method, const LadderSpec& ladder,
                               int forced_digits = -1);

/// Disk evaluation extrapolated to n_int -> infinity.
ImspeValue imspe_converged(const Design& d, const Hyperparameters& h,
                           Method method, const LadderSpec& ladder,
                           int forced_digits = -1);

/// Converged IMSPE for either domain kind: extrapolated for the disk
/// (the DiskSpec's n_int seeds the top of the ladder), exact for rectangles.
ImspeValue imspe_best(const Design& d, const Hyperparameters& h,
                      const Domain& dom, const LadderSpec& ladder,
                      int forced_digits = -1);

/// n = 1 shortcut: IMSPE = 2 - 2*R01 from the single needed entry.
double imspe_n1_closed(const DesignPoint& p, const Hyperparameters& h,
                       const DiskSpec& spec);

/// Symmetric n = 2 closed form for the design {(x11, 0), (-x11, 0)} with
/// A = exp(-4*theta1*x11^2):
///   IMSPE = 3/2 + A/2 - 2*R01 - (R11 - R12)/(1 - A).
double imspe_n2_symmetric(double x11, const Hyperparameters& h,
                          const DiskSpec& spec);

struct TwinLimitResult {
  std::vector<double> deltas;       // decreasing
  std::vector<ImspeValue> values;   // matching evaluations (converged)
  double limit = 0.0;               // delta -> 0 extrapolation
  double error_estimate = 0.0;
  int precision_digits_used = 0;    // highest rung touched
};

/// Evaluates a delta-parameterized design family on a decreasing delta
/// sequence and extrapolates to delta -> 0 with an even-power (delta^2)
/// polynomial through the last three points. Strip-count extrapolation is
/// applied per delta first, so the two limits stay orthogonal.
TwinLimitResult twin_limit(const std::function<Design(double)>& family,
                           const Hyperparameters& h, const Domain& dom,
                           const std::vector<double>& deltas,
                           const LadderSpec& ladder = {});

}  // namespace imspekit
