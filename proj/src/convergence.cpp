#include "imspekit/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "imspekit/errors.hpp"

namespace imspekit {

namespace {

std::vector<std::pair<int, double>> sorted_samples(const ConvergenceSeries& s) {
  auto v = s.samples;
  std::sort(v.begin(), v.end());
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].first == v[i - 1].first) {
      throw DomainError("convergence series has duplicate n_int = " +
                        std::to_string(v[i].first));
    }
  }
  return v;
}

struct TripleFit {
  double limit;
  double order;
  bool flat;  // tail differences at roundoff; limit = last value
};

// Aitken on three samples with common ratio r: p = log_r(d1/d2),
// limit = v3 + (v3 - v2)/(r^p - 1).
TripleFit fit_triple(const std::pair<int, double>* s, double noise_floor) {
  const double r1 = double(s[1].first) / double(s[0].first);
  const double r2 = double(s[2].first) / double(s[1].first);
  if (std::abs(r1 - r2) > 1e-9 * r1) {
    throw DomainError("extrapolate requires a geometric n_int ladder");
  }
  const double d1 = s[1].second - s[0].second;
  const double d2 = s[2].second - s[1].second;
  const double scale = std::max({1.0, std::abs(s[2].second)});
  const double floor =
      std::max(64 * std::numeric_limits<double>::epsilon() * scale, noise_floor);
  if (std::abs(d2) <= floor) {
    // the last step is inside the evaluation-noise band: the series has
    // converged as far as it can be resolved
    return {s[2].second, std::numeric_limits<double>::infinity(), true};
  }
  if (d1 == 0.0 || d2 == 0.0 || (d1 > 0) != (d2 > 0) ||
      std::abs(d2) >= std::abs(d1)) {
    throw NonConvergenceError(
        "tail differences of the convergence series do not shrink "
        "monotonically");
  }
  const double p = std::log(d1 / d2) / std::log(r2);
  const double limit = s[2].second + d2 / (std::pow(r2, p) - 1.0);
  return {limit, p, false};
}

}  // namespace

ConvergenceEstimate extrapolate(const ConvergenceSeries& series,
                                double noise_floor) {
  const auto s = sorted_samples(series);
  if (s.size() < 3) {
    throw DomainError("extrapolate needs at least three samples");
  }
  const TripleFit last = fit_triple(&s[s.size() - 3], noise_floor);

  ConvergenceEstimate est;
  est.limit = last.limit;
  est.order = last.order;
  est.below_noise_floor = last.flat;
  if (last.flat) {
    est.residual = 0.0;
  } else if (s.size() >= 4) {
    try {
      const TripleFit prev = fit_triple(&s[s.size() - 4], noise_floor);
      est.residual = std::abs(last.limit - prev.limit);
    } catch (const Error&) {
      // pre-asymptotic head; fall back to the correction magnitude
      est.residual = std::abs(last.limit - s.back().second);
    }
  } else {
    est.residual = std::abs(last.limit - s.back().second);
  }
  try {
    est.local_slopes = local_slopes(ConvergenceSeries{s}, est.limit);
  } catch (const DegenerateSampleError&) {
    est.local_slopes.clear();  // flat tail: slopes are undefined
  }
  return est;
}

std::vector<double> local_slopes(const ConvergenceSeries& series,
                                 double reference_limit) {
  const auto s = sorted_samples(series);
  std::vector<double> slopes;
  slopes.reserve(s.size() > 0 ? s.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double e1 = std::abs(s[i].second - reference_limit);
    const double e2 = std::abs(s[i + 1].second - reference_limit);
    if (e1 == 0.0 || e2 == 0.0) {
      throw DegenerateSampleError(
          "sample value coincides exactly with the reference limit");
    }
    slopes.push_back(std::log(e2 / e1) /
                     std::log(double(s[i + 1].first) / double(s[i].first)));
  }
  return slopes;
}

}  // namespace imspekit
