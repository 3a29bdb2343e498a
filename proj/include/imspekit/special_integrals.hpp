#pragma once

// Closed-form scalar integrals that every moment-matrix entry reduces to:
// the circle-chord primitive and four erf-based Gaussian integrals.
// These are evaluated in closed form only; numerical quadrature exists
// solely in the test oracles.

#include <cmath>

#include "imspekit/errors.hpp"
#include "imspekit/scalar.hpp"

namespace imspekit {

/// Antiderivative of sqrt(a^2 - x^2):
///   x*sqrt(a^2 - x^2)/2 + (a^2/2)*asin(x/a),  a >= 0, |x| <= a.
/// Differences of this primitive give exact circular-segment areas.
template <class T>
T chord_primitive(const T& x, const T& a) {
  using std::asin;
  using std::fabs;
  using std::sqrt;
  if (a < T(0)) throw DomainError("chord_primitive: a must be nonnegative");
  if (a == T(0)) return T(0);
  if (fabs(x) > a) {
    throw DomainError("chord_primitive: |x| > a (strip index outside the disk)");
  }
  return x * sqrt(a * a - x * x) / 2 + (a * a / 2) * asin(x / a);
}

/// Integral of exp(-theta*(a-x)^2) over [-W, W].
template <class T>
T gauss_strip_integral(const T& theta, const T& a, const T& W) {
  using std::sqrt;
  const T s = sqrt(theta);
  return sqrt(pi_v<T>() / (4 * theta)) *
         (erf_accurate(s * (W + a)) + erf_accurate(s * (W - a)));
}

/// Integral of exp(-theta*(a-x)^2) over [center-half, center+half].
template <class T>
T gauss_strip_integral_offset(const T& theta, const T& a, const T& center,
                              const T& half) {
  using std::sqrt;
  const T s = sqrt(theta);
  return sqrt(pi_v<T>() / (4 * theta)) *
         (erf_accurate(s * (half - center + a)) +
          erf_accurate(s * (half + center - a)));
}

namespace detail {

// Attaches the pair-separation damping factor exp(-e) to a nonnegative
// erf-sum term. For large e the direct product underflows in the correct
// direction; routing through logs keeps the evaluation well ordered when
// the term itself is large enough to matter.
template <class T>
T damp(const T& term, const T& e) {
  using std::exp;
  using std::log;
  if (e > T(700) && term > T(0)) {
    return exp(log(term) - e);
  }
  return term * exp(-e);
}

}  // namespace detail

/// Integral of exp(-theta*[(a-x)^2 + (b-x)^2]) over [-W, W].
template <class T>
T gauss_pair_integral(const T& theta, const T& a, const T& b, const T& W) {
  using std::sqrt;
  const T s = sqrt(2 * theta);
  const T m = (a + b) / 2;
  const T term = sqrt(pi_v<T>() / (8 * theta)) *
                 (erf_accurate(s * (W + m)) + erf_accurate(s * (W - m)));
  return detail::damp(term, theta * (a - b) * (a - b) / 2);
}

/// Integral of exp(-theta*[(a-x)^2 + (b-x)^2]) over [center-half, center+half].
template <class T>
T gauss_pair_integral_offset(const T& theta, const T& a, const T& b,
                             const T& center, const T& half) {
  using std::sqrt;
  const T s = sqrt(2 * theta);
  const T m = (a + b) / 2;
  const T term = sqrt(pi_v<T>() / (8 * theta)) *
                 (erf_accurate(s * (half - center + m)) +
                  erf_accurate(s * (half + center - m)));
  return detail::damp(term, theta * (a - b) * (a - b) / 2);
}

}  // namespace imspekit
