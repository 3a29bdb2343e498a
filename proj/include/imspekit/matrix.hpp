#pragma once

// Dense square matrices and the small symmetric-indefinite solves behind
// tr(L^-1 R). Everything here is sized (n+1) x (n+1) with n <= a handful,
// so explicit LU with partial pivoting and explicit inverses for condition
// estimates are the right tools.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "imspekit/errors.hpp"

namespace imspekit {

template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, const T& fill = T(0))
      : n_(n), a_(n * n, fill) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<T> a_;
};

template <class T>
T one_norm(const SquareMatrix<T>& A) {
  using std::fabs;
  T best(0);
  for (std::size_t j = 0; j < A.size(); ++j) {
    T col(0);
    for (std::size_t i = 0; i < A.size(); ++i) col += fabs(A(i, j));
    if (col > best) best = col;
  }
  return best;
}

/// LU factorization with partial pivoting, in place.
template <class T>
class LuFactor {
 public:
  explicit LuFactor(SquareMatrix<T> A) : lu_(std::move(A)), piv_(lu_.size()) {
    using std::fabs;
    const std::size_t n = lu_.size();
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (fabs(lu_(i, k)) > fabs(lu_(p, k))) p = i;
      }
      piv_[k] = p;
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      }
      if (lu_(k, k) == T(0)) {
        throw SingularMatrixError(
            "LU factorization hit an exactly zero pivot",
            std::numeric_limits<double>::infinity());
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        for (std::size_t j = k + 1; j < n; ++j) {
          lu_(i, j) -= lu_(i, k) * lu_(k, j);
        }
      }
    }
  }

  std::vector<T> solve(std::vector<T> b) const {
    const std::size_t n = lu_.size();
    // The stored multipliers belong to fully permuted rows (factorization
    // swaps whole rows, multiplier columns included), so every row swap must
    // land on b before the forward elimination starts.
    for (std::size_t k = 0; k < n; ++k) {
      if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = k + 1; i < n; ++i) b[i] -= lu_(i, k) * b[k];
    }
    for (std::size_t k = n; k-- > 0;) {
      for (std::size_t j = k + 1; j < n; ++j) b[k] -= lu_(k, j) * b[j];
      b[k] /= lu_(k, k);
    }
    return b;
  }

  SquareMatrix<T> inverse() const {
    const std::size_t n = lu_.size();
    SquareMatrix<T> inv(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<T> e(n, T(0));
      e[j] = T(1);
      auto col = solve(std::move(e));
      for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
  }

 private:
  SquareMatrix<T> lu_;
  std::vector<std::size_t> piv_;
};

/// 1-norm condition number via the explicit inverse (matrices are tiny).
/// Returns +inf instead of throwing when the factorization breaks down.
template <class T>
double condition_1norm(const SquareMatrix<T>& A) {
  try {
    LuFactor<T> f(A);
    return static_cast<double>(one_norm(A) * one_norm(f.inverse()));
  } catch (const SingularMatrixError&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// tr(L^-1 R) by column-by-column solves. Equals the element-wise product
/// sum of L^-1 against symmetric R.
template <class T>
T trace_of_solve(const SquareMatrix<T>& L, const SquareMatrix<T>& R) {
  const std::size_t n = L.size();
  T tr(0);
  try {
    LuFactor<T> f(L);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<T> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = R(i, j);
      auto y = f.solve(std::move(col));
      tr += y[j];
    }
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("trace_of_solve: bordered matrix is singular",
                              condition_1norm(L));
  }
  return tr;
}

}  // namespace imspekit
