#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "grom/errors.hpp"
#include "grom/matrix.hpp"

namespace grom {

namespace detail {

/// LU factorization with partial pivoting, in place. Returns the pivot
/// permutation; throws on an exactly singular pivot.
inline std::vector<std::size_t> lu_factor(Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> piv(n);
  std::iota(piv.begin(), piv.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    if (best == 0.0)
      throw numerical_error("solve: singular matrix (zero pivot at " +
                            std::to_string(k) + ")");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(piv[k], piv[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      const double lik = a(i, k);
      if (lik == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
  return piv;
}

inline Matrix lu_solve(const Matrix& lu, const std::vector<std::size_t>& piv,
                       const Matrix& b) {
  const std::size_t n = lu.rows();
  Matrix x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = b(piv[i], j);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = k + 1; i < n; ++i) {
      const double lik = lu(i, k);
      if (lik == 0.0) continue;
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= lik * x(k, j);
    }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) x(k, j) /= lu(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      const double uik = lu(i, k);
      if (uik == 0.0) continue;
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= uik * x(k, j);
    }
  }
  return x;
}

inline double norm_inf(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace detail

/// Infinity-norm condition estimate via the explicit inverse (the systems in
/// this library are small: q x q or N_p x N_p).
inline double condition_estimate(const Matrix& a) {
  if (a.rows() != a.cols())
    throw numerical_error("solve: condition estimate needs a square matrix");
  Matrix lu = a;
  std::vector<std::size_t> piv;
  try {
    piv = detail::lu_factor(lu);
  } catch (const numerical_error&) {
    return std::numeric_limits<double>::infinity();
  }
  const Matrix inv = detail::lu_solve(lu, piv, Matrix::identity(a.rows()));
  return detail::norm_inf(a) * detail::norm_inf(inv);
}

/// Solves a X = b for square a. Throws when the condition estimate reaches
/// 1e12: downstream this is the signal that the log map is outside its
/// validity neighborhood.
inline Matrix solve_square(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols())
    throw numerical_error("solve: matrix is not square (" + a.shape_string() + ")");
  if (a.cols() != b.rows())
    throw numerical_error("solve: rhs shape mismatch " + a.shape_string() + " vs " +
                          b.shape_string());
  a.ensure_finite("solve");
  b.ensure_finite("solve");
  const double cond = condition_estimate(a);
  if (!(cond < 1e12))
    throw numerical_error("solve: matrix singular or ill-conditioned, condition estimate " +
                          std::to_string(cond));
  Matrix lu = a;
  const std::vector<std::size_t> piv = detail::lu_factor(lu);
  return detail::lu_solve(lu, piv, b);
}

}  // namespace grom
