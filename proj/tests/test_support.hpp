#pragma once

// Shared helpers and independent oracles for the test suites. The oracles
// deliberately use different algorithms from the library (two-sided Jacobi
// eigendecomposition, Gauss-Jordan elimination) so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "grom/grassmann.hpp"
#include "grom/matrix.hpp"
#include "grom/qr.hpp"

namespace testsup {

inline grom::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                  double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  grom::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
  return m;
}

inline grom::OrthonormalBasis random_basis(std::mt19937_64& rng, std::size_t n, std::size_t q) {
  return grom::OrthonormalBasis(grom::qr_orthonormalize(random_matrix(rng, n, q)));
}

/// Random orthogonal q x q matrix (Gram-Schmidt of a Gaussian matrix).
inline grom::Matrix random_orthogonal(std::mt19937_64& rng, std::size_t q) {
  grom::Matrix a = random_matrix(rng, q, q);
  // Modified Gram-Schmidt.
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < q; ++i) dot += a(i, j) * a(i, k);
      for (std::size_t i = 0; i < q; ++i) a(i, j) -= dot * a(i, k);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < q; ++i) norm += a(i, j) * a(i, j);
    norm = std::sqrt(norm);
    if (norm < 1e-12) {  // re-draw degenerate columns
      for (std::size_t i = 0; i < q; ++i) a(i, j) = (i == j) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < q; ++i) dot += a(i, j) * a(i, k);
        for (std::size_t i = 0; i < q; ++i) a(i, j) -= dot * a(i, k);
      }
      norm = 0.0;
      for (std::size_t i = 0; i < q; ++i) norm += a(i, j) * a(i, j);
      norm = std::sqrt(norm);
    }
    for (std::size_t i = 0; i < q; ++i) a(i, j) /= norm;
  }
  return a;
}

/// Eigendecomposition of a symmetric matrix by classical two-sided cyclic
/// Jacobi rotations. Returns eigenvalues sorted non-increasing.
struct SymEig {
  std::vector<double> values;
  grom::Matrix vectors;  // columns, same order as values
};

inline SymEig jacobi_eigen_sym(grom::Matrix a) {
  const std::size_t n = a.rows();
  grom::Matrix v = grom::Matrix::identity(n);
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  SymEig out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return out.values[x] > out.values[y]; });
  SymEig sorted;
  sorted.values.resize(n);
  sorted.vectors = grom::Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    sorted.values[j] = out.values[order[j]];
    for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, j) = v(i, order[j]);
  }
  return sorted;
}

/// Singular values of A as sqrt of the eigenvalues of A^T A (or A A^T when
/// that side is smaller), sorted non-increasing. Independent of thin_svd.
inline std::vector<double> singular_values_oracle(const grom::Matrix& a) {
  const bool gram_right = a.cols() <= a.rows();
  const grom::Matrix g = gram_right ? grom::gram_product(a, a)
                                    : grom::product_transposed(a, a);
  SymEig e = jacobi_eigen_sym(g);
  std::vector<double> s(e.values.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(e.values[i], 0.0));
  return s;
}

/// Gauss-Jordan elimination with full pivoting: independent linear-solve
/// oracle for small well-conditioned systems.
inline grom::Matrix gauss_jordan_solve(grom::Matrix a, grom::Matrix b) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> col_of(n);
  std::vector<bool> used_row(n, false), used_col(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pr = 0, pc = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_row[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used_col[j]) continue;
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          pr = i;
          pc = j;
        }
      }
    }
    used_row[pr] = used_col[pc] = true;
    col_of[pc] = pr;
    const double piv = a(pr, pc);
    for (std::size_t j = 0; j < n; ++j) a(pr, j) /= piv;
    for (std::size_t j = 0; j < b.cols(); ++j) b(pr, j) /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == pr) continue;
      const double f = a(i, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(pr, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) -= f * b(pr, j);
    }
  }
  grom::Matrix x(n, b.cols());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t c = 0; c < b.cols(); ++c) x(j, c) = b(col_of[j], c);
  return x;
}

/// Kolmogorov-Smirnov statistic of samples against U(lo, hi).
inline double ks_uniform(std::vector<double> samples, double lo, double hi) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = (samples[i] - lo) / (hi - lo);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
  }
  return d;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double frob_diff(const grom::Matrix& a, const grom::Matrix& b) {
  grom::Matrix d = a;
  d -= b;
  return d.frobenius_norm();
}

/// Distance between subspaces measured as the Frobenius norm of the
/// difference of orthogonal projectors (representative independent).
inline double projector_distance(const grom::Matrix& a, const grom::Matrix& b) {
  return frob_diff(grom::product_transposed(a, a), grom::product_transposed(b, b));
}

}  // namespace testsup
