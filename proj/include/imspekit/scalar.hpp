#pragma once

// Scalar layer: the precision ladder, erf, and compensated summation.
//
// All numerical kernels in this library are templated on the scalar type.
// Standard precision is plain double; the extended rungs are fixed-digit
// MPFR floats (50, 100, 160 decimal digits). The 160-digit cap matches the
// most precision the computations here ever need.

#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace imspekit {

using Float50 = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<50>, boost::multiprecision::et_off>;
using Float100 = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<100>, boost::multiprecision::et_off>;
using Float160 = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<160>, boost::multiprecision::et_off>;

/// Decimal digits carried by scalar type T (15 for double).
template <class T>
constexpr int scalar_digits10() {
  return std::numeric_limits<T>::digits10;
}

template <class T>
inline T pi_v() {
  return boost::math::constants::pi<T>();
}

/// erf with relative error at the scalar's working precision.
/// glibc's erf is faithfully rounded; the multiprecision overloads go
/// through boost::math at the backend's full digit count.
inline double erf_accurate(double x) { return std::erf(x); }

template <class T>
inline T erf_accurate(const T& x) {
  return boost::math::erf(x);
}

/// Neumaier-compensated accumulator. Strip sums run through this so the
/// accumulation error stays far below the strip-truncation error being
/// extrapolated away.
template <class T>
class CompensatedSum {
 public:
  void add(const T& x) {
    using std::fabs;
    T t = sum_ + x;
    if (fabs(sum_) >= fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{0};
  T comp_{0};
};

}  // namespace imspekit
