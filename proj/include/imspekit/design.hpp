#pragma once

// Designs, hyperparameters, the separable squared-exponential kernel, and
// the bordered matrix L = [[0, 1], [1, V]] of the simple-kriging predictor.
// sigma_Z^2 is fixed to 1 throughout.

#include <cmath>
#include <vector>

#include "imspekit/errors.hpp"
#include "imspekit/matrix.hpp"

namespace imspekit {

struct Hyperparameters {
  double theta1 = 1.0;  // rate per squared x1-distance
  double theta2 = 1.0;  // rate per squared x2-distance

  void validate() const {
    if (!(theta1 > 0.0) || !(theta2 > 0.0)) {
      throw DomainError("hyperparameters must be positive");
    }
  }
};

struct DesignPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  bool operator==(const DesignPoint&) const = default;
};

using Design = std::vector<DesignPoint>;

/// exp(-theta1*(p1-q1)^2 - theta2*(p2-q2)^2), evaluated in scalar type T.
template <class T>
T kernel(const DesignPoint& p, const DesignPoint& q, const Hyperparameters& h) {
  using std::exp;
  const T d1 = T(p.x1) - T(q.x1);
  const T d2 = T(p.x2) - T(q.x2);
  return exp(-T(h.theta1) * d1 * d1 - T(h.theta2) * d2 * d2);
}

/// Covariance matrix V of the design: unit diagonal, entries in (0, 1].
/// Exactly coincident points are rejected; twin-point analysis goes through
/// the delta-parameterized limit API instead.
template <class T>
SquareMatrix<T> build_cov(const Design& d, const Hyperparameters& h) {
  if (d.empty()) throw DomainError("design must contain at least one point");
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d[i] == d[j]) {
        throw DuplicatePointError(
            "design points " + std::to_string(i) + " and " + std::to_string(j) +
            " coincide exactly; V would be singular");
      }
    }
  }
  SquareMatrix<T> V(n);
  for (std::size_t i = 0; i < n; ++i) {
    V(i, i) = T(1);
    for (std::size_t j = i + 1; j < n; ++j) {
      V(i, j) = V(j, i) = kernel<T>(d[i], d[j], h);
    }
  }
  return V;
}

/// Bordered matrix L: zero corner, all-ones border, covariance block V.
template <class T>
SquareMatrix<T> build_bordered(const SquareMatrix<T>& V) {
  const std::size_t n = V.size();
  SquareMatrix<T> L(n + 1);
  L(0, 0) = T(0);
  for (std::size_t j = 1; j <= n; ++j) L(0, j) = L(j, 0) = T(1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) L(i + 1, j + 1) = V(i, j);
  }
  return L;
}

}  // namespace imspekit
