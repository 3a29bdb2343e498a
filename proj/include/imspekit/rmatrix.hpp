#pragma once

// The moment matrix R: exact for rectangles, strip-decomposed for the unit
// disk. Index 0 is the constant row/column.
//
// Disk entries are sums over n_int horizontal strips of height 2*Delta,
// Delta = 1/n_int. Three quadrature variants are supported:
//   Method A: simple half-widths sqrt(1 - c^2); x2 factor by midpoint rule.
//   Method B: area-exact averaged half-widths; x2 factor by the erf closed
//             form over the strip.
//   Method C: averaged half-widths; x2 factor by midpoint rule.

#include <cmath>
#include <string>

#include "imspekit/design.hpp"
#include "imspekit/special_integrals.hpp"

namespace imspekit {

/// Rectangle centered at (0, center2) with half-width W and half-height D.
struct RectDomain {
  double center2 = 0.0;
  double half_width = 1.0;
  double half_height = 1.0;

  void validate() const {
    if (!(half_width > 0.0) || !(half_height > 0.0)) {
      throw DomainError("rectangle half-width and half-height must be positive");
    }
  }
};

enum class Method { A, B, C };

inline char method_name(Method m) {
  switch (m) {
    case Method::A: return 'A';
    case Method::B: return 'B';
    default: return 'C';
  }
}

inline Method method_from_name(const std::string& s) {
  if (s == "A") return Method::A;
  if (s == "B") return Method::B;
  if (s == "C") return Method::C;
  throw ConfigError("unknown convergence method '" + s + "' (expected A, B, or C)");
}

struct DiskSpec {
  int n_int = 256;
  Method method = Method::C;

  void validate() const {
    if (n_int < 2 || n_int % 2 != 0) {
      throw DomainError("n_int must be even and >= 2");
    }
  }
};

/// Center ordinate of strip k (1-based, counting from the bottom of the disk):
/// x_{2;k} = -1 - Delta + 2*k*Delta with Delta = 1/n_int.
template <class T>
T strip_center(int k, int n_int) {
  if (n_int < 2 || n_int % 2 != 0) throw DomainError("n_int must be even and >= 2");
  if (k < 1 || k > n_int) {
    throw DomainError("strip index " + std::to_string(k) + " out of range 1.." +
                      std::to_string(n_int));
  }
  const T delta = T(1) / n_int;
  return T(-1) - delta + 2 * k * delta;
}

/// Simple half-width: horizontal distance to the circle at strip mid-height.
/// Overestimates each section's area.
template <class T>
T width_simple(const T& center2) {
  using std::fabs;
  using std::sqrt;
  if (fabs(center2) >= T(1)) {
    throw DomainError("width_simple: strip center must lie strictly inside the disk");
  }
  return sqrt(T(1) - center2 * center2);
}

/// Vertically averaged half-width; 4*W_k*Delta is the exact area of the
/// k'th section. Chord-primitive arguments are clamped against roundoff at
/// the top and bottom strips, where they hit +-1 exactly.
template <class T>
T width_avg(int k, int n_int) {
  const T c = strip_center<T>(k, n_int);
  const T delta = T(1) / n_int;
  T u = c + delta;
  T l = c - delta;
  if (u > T(1)) u = T(1);
  if (l < T(-1)) l = T(-1);
  return (T(n_int) / 4) *
         (2 * chord_primitive(u, T(1)) - 2 * chord_primitive(l, T(1)));
}

/// Exact moment matrix for a rectangular prediction domain.
template <class T>
SquareMatrix<T> build_r_rect(const Design& d, const Hyperparameters& h,
                             const RectDomain& dom) {
  h.validate();
  dom.validate();
  const std::size_t n = d.size();
  const T th1 = T(h.theta1);
  const T th2 = T(h.theta2);
  const T W = T(dom.half_width);
  const T D = T(dom.half_height);
  const T c2 = T(dom.center2);
  const T norm = T(1) / (4 * W * D);

  SquareMatrix<T> R(n + 1);
  R(0, 0) = T(1);
  for (std::size_t j = 0; j < n; ++j) {
    R(0, j + 1) = R(j + 1, 0) =
        norm * gauss_strip_integral(th1, T(d[j].x1), W) *
        gauss_strip_integral_offset(th2, T(d[j].x2), c2, D);
    for (std::size_t i = 0; i <= j; ++i) {
      R(i + 1, j + 1) = R(j + 1, i + 1) =
          norm * gauss_pair_integral(th1, T(d[i].x1), T(d[j].x1), W) *
          gauss_pair_integral_offset(th2, T(d[i].x2), T(d[j].x2), c2, D);
    }
  }
  return R;
}

/// Strip-decomposed moment matrix for the unit disk.
///
/// Per strip the entries reuse the rectangle formulas with W := W_k and
/// normalization 1/pi. The (0,0) entry is the summed strip area over pi
/// under the chosen width rule, so each method's own area error stays
/// visible to convergence analysis.
template <class T>
SquareMatrix<T> build_r_disk(const Design& d, const Hyperparameters& h,
                             const DiskSpec& spec) {
  h.validate();
  spec.validate();
  const std::size_t n = d.size();
  const int n_int = spec.n_int;
  const T th1 = T(h.theta1);
  const T th2 = T(h.theta2);
  const T delta = T(1) / n_int;
  const T pi = pi_v<T>();
  const bool midpoint_outer = spec.method != Method::B;

  std::vector<CompensatedSum<T>> acc((n + 1) * (n + 2) / 2);
  auto at = [&](std::size_t i, std::size_t j) -> CompensatedSum<T>& {
    // upper triangle, i <= j
    return acc[j * (j + 1) / 2 + i];
  };

  for (int k = 1; k <= n_int; ++k) {
    const T c = strip_center<T>(k, n_int);
    const T Wk = (spec.method == Method::A) ? width_simple(c) : width_avg<T>(k, n_int);
    at(0, 0).add(4 * Wk * delta / pi);
    for (std::size_t j = 0; j < n; ++j) {
      const T inner0 = gauss_strip_integral(th1, T(d[j].x1), Wk);
      T outer0;
      if (midpoint_outer) {
        using std::exp;
        const T dy = T(d[j].x2) - c;
        outer0 = exp(-th2 * dy * dy) * 2 * delta;
      } else {
        outer0 = gauss_strip_integral_offset(th2, T(d[j].x2), c, delta);
      }
      at(0, j + 1).add(inner0 * outer0 / pi);
      for (std::size_t i = 0; i <= j; ++i) {
        const T inner = gauss_pair_integral(th1, T(d[i].x1), T(d[j].x1), Wk);
        T outer;
        if (midpoint_outer) {
          using std::exp;
          const T dyi = T(d[i].x2) - c;
          const T dyj = T(d[j].x2) - c;
          outer = exp(-th2 * (dyi * dyi + dyj * dyj)) * 2 * delta;
        } else {
          outer = gauss_pair_integral_offset(th2, T(d[i].x2), T(d[j].x2), c, delta);
        }
        at(i + 1, j + 1).add(inner * outer / pi);
      }
    }
  }

  SquareMatrix<T> R(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      R(i, j) = R(j, i) = at(i, j).value();
    }
  }
  return R;
}

}  // namespace imspekit
