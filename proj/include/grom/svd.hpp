#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "grom/errors.hpp"
#include "grom/matrix.hpp"

namespace grom {

/// Thin SVD A = u * diag(sigma) * v^T with k = min(rows, cols).
/// sigma is non-negative and non-increasing; u is m x k, v is n x k.
struct ThinSvd {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;

  Matrix reconstruct() const { return product_transposed(scale_columns(u, sigma), v); }
};

namespace instrument {

/// Shapes of thin_svd calls, recorded while a recorder is active. Used by
/// tests to verify which factorizations an online query actually performs.
struct SvdCall {
  std::size_t rows;
  std::size_t cols;
};

inline thread_local std::vector<SvdCall>* svd_log = nullptr;

class SvdCallRecorder {
 public:
  SvdCallRecorder() { svd_log = &calls_; }
  ~SvdCallRecorder() { svd_log = nullptr; }
  SvdCallRecorder(const SvdCallRecorder&) = delete;
  SvdCallRecorder& operator=(const SvdCallRecorder&) = delete;
  const std::vector<SvdCall>& calls() const { return calls_; }

 private:
  std::vector<SvdCall> calls_;
};

}  // namespace instrument

namespace detail {

// Deterministic orthonormal completion for (near-)zero columns: replaces
// column j of u by the first coordinate vector whose residual against the
// other columns stays large.
inline void complete_column(Matrix& u, std::size_t j, const std::vector<bool>& valid) {
  const std::size_t m = u.rows();
  const std::size_t k = u.cols();
  for (std::size_t cand = 0; cand < m; ++cand) {
    std::vector<double> w(m, 0.0);
    w[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t c = 0; c < k; ++c) {
        if (c == j || !valid[c]) continue;
        double dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += w[i] * u(i, c);
        for (std::size_t i = 0; i < m; ++i) w[i] -= dot * u(i, c);
      }
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.5) {
      for (std::size_t i = 0; i < m; ++i) u(i, j) = w[i] / norm;
      return;
    }
  }
  throw numerical_error("svd: orthonormal completion failed");
}

}  // namespace detail

/// Thin SVD by one-sided Jacobi rotations. Deterministic: singular values
/// sorted non-increasing, sign fixed so the largest-magnitude entry of each
/// left vector is non-negative (ties broken by lowest row index).
inline ThinSvd thin_svd(const Matrix& a, std::size_t sweeps_per_k = 100) {
  a.ensure_finite("svd");
  if (instrument::svd_log) instrument::svd_log->push_back({a.rows(), a.cols()});

  const bool transposed = a.rows() < a.cols();
  Matrix w = transposed ? a.transpose() : a;
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();
  Matrix v = Matrix::identity(n);

  const double tol = 1e-15;
  const std::size_t max_sweeps = sweeps_per_k * n;
  double off = 0.0;
  bool converged = false;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          app += wp * wp;
          aqq += wq * wq;
          apq += wp * wq;
        }
        const double scale = std::sqrt(app * aqq);
        if (scale == 0.0 || std::abs(apq) <= tol * scale) continue;
        off = std::max(off, std::abs(apq) / scale);
        // Rutishauser rotation annihilating the (p,q) inner product.
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    converged = off == 0.0;
  }
  if (!converged)
    throw numerical_error("svd: Jacobi sweeps did not converge after " +
                          std::to_string(max_sweeps) +
                          " sweeps, residual " + std::to_string(off));

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
    sigma[j] = std::sqrt(s);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  Matrix u(m, n);
  Matrix vs(n, n);
  std::vector<double> sig(n);
  const double sig_max = sigma[order[0]];
  const double zero_tol = sig_max * 1e-14;
  std::vector<bool> valid(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    sig[j] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) vs(i, j) = v(i, src);
    if (sig[j] > zero_tol) {
      for (std::size_t i = 0; i < m; ++i) u(i, j) = w(i, src) / sig[j];
      valid[j] = true;
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!valid[j]) {
      detail::complete_column(u, j, valid);
      valid[j] = true;
    }

  // Sign convention on the left factor.
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (std::abs(u(i, j)) > best) {
        best = std::abs(u(i, j));
        arg = i;
      }
    if (u(arg, j) < 0.0) {
      for (std::size_t i = 0; i < m; ++i) u(i, j) = -u(i, j);
      for (std::size_t i = 0; i < n; ++i) vs(i, j) = -vs(i, j);
    }
  }

  ThinSvd out;
  out.sigma = std::move(sig);
  if (transposed) {
    out.u = std::move(vs);
    out.v = std::move(u);
    // Sign convention was applied to the factor that is now v; re-fix on u.
    for (std::size_t j = 0; j < out.u.cols(); ++j) {
      std::size_t arg = 0;
      double best = -1.0;
      for (std::size_t i = 0; i < out.u.rows(); ++i)
        if (std::abs(out.u(i, j)) > best) {
          best = std::abs(out.u(i, j));
          arg = i;
        }
      if (out.u(arg, j) < 0.0) {
        for (std::size_t i = 0; i < out.u.rows(); ++i) out.u(i, j) = -out.u(i, j);
        for (std::size_t i = 0; i < out.v.rows(); ++i) out.v(i, j) = -out.v(i, j);
      }
    }
  } else {
    out.u = std::move(u);
    out.v = std::move(vs);
  }
  return out;
}

}  // namespace grom
