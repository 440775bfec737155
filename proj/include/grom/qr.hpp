#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "grom/errors.hpp"
#include "grom/matrix.hpp"

namespace grom {

/// Orthonormalizes the columns of a (N x q, N >= q) by Householder QR and
/// returns Q with span(Q) = span(a). The R diagonal is kept positive, so Q's
/// columns track the input columns' orientation. Throws on rank deficiency,
/// naming the offending column.
inline Matrix qr_orthonormalize(const Matrix& a) {
  a.ensure_finite("qr");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n)
    throw numerical_error("qr: need rows >= cols, got " + a.shape_string());

  Matrix w = a;                       // becomes R in the upper triangle
  std::vector<std::vector<double>> hh(n);  // Householder vectors
  std::vector<double> rdiag(n);
  std::vector<bool> flip(n, false);
  double rmax = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm += w(i, k) * w(i, k);
    norm = std::sqrt(norm);
    rmax = std::max(rmax, norm);
    if (norm <= 1e-12 * std::max(rmax, 1e-300))
      throw numerical_error("qr: rank deficiency at column " + std::to_string(k));

    const double alpha = (w(k, k) >= 0.0) ? -norm : norm;
    std::vector<double> v(m - k);
    v[0] = w(k, k) - alpha;
    for (std::size_t i = k + 1; i < m; ++i) v[i - k] = w(i, k);
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 > 0.0) {
      // Apply H = I - 2 v v^T / (v^T v) to the trailing block.
      for (std::size_t j = k; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i - k] * w(i, j);
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < m; ++i) w(i, j) -= f * v[i - k];
      }
    }
    rdiag[k] = w(k, k);
    flip[k] = rdiag[k] < 0.0;
    hh[k] = std::move(v);
  }

  // Q = H_1 ... H_n applied to the first n columns of I.
  Matrix q(m, n);
  for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    const std::vector<double>& v = hh[k];
    double vnorm2 = 0.0;
    for (double x : v) vnorm2 += x * x;
    if (vnorm2 == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * q(i, j);
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = k; i < m; ++i) q(i, j) -= f * v[i - k];
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (flip[j])
      for (std::size_t i = 0; i < m; ++i) q(i, j) = -q(i, j);
  return q;
}

/// Orthonormality correction for a matrix whose columns are already
/// orthonormal up to rounding: Cholesky of the q x q Gram matrix followed by
/// a triangular solve from the right, a = q * r with r upper triangular and
/// positive diagonal (so column orientation is preserved, matching
/// qr_orthonormalize). Costs O(N q^2) with a tiny constant instead of a full
/// Householder pass. Falls back to qr_orthonormalize when the input is not
/// close to orthonormal.
inline Matrix reorthonormalize_nearly(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const Matrix g = gram_product(a, a);
  double dev = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dev = std::max(dev, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  if (!(dev < 0.1)) return qr_orthonormalize(a);

  // Cholesky g = r^T r, r upper triangular with positive diagonal.
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = g(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= r(k, i) * r(k, j);
      if (i == j) {
        if (!(s > 0.0)) return qr_orthonormalize(a);
        r(i, i) = std::sqrt(s);
      } else {
        r(i, j) = s / r(i, i);
      }
    }
  }
  // Column-wise forward substitution for q = a r^{-1}.
  Matrix q = a;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const double f = r(k, j);
      if (f == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) q(i, j) -= f * q(i, k);
    }
    const double inv = 1.0 / r(j, j);
    for (std::size_t i = 0; i < m; ++i) q(i, j) *= inv;
  }
  return q;
}

}  // namespace grom
