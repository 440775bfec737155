#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "grom/errors.hpp"
#include "grom/grassmann.hpp"
#include "grom/matrix.hpp"
#include "grom/qr.hpp"
#include "grom/svd.hpp"

namespace grom {

/// Truncation rule for POD: keep a fixed rank, or the smallest rank whose
/// cumulative singular-value energy reaches epsilon.
struct TruncationRule {
  enum class Kind { rank, energy };
  Kind kind = Kind::rank;
  std::size_t rank = 1;
  double epsilon = 1.0;

  static TruncationRule Rank(std::size_t q) {
    if (q == 0) throw config_error("pod: rank must be positive");
    TruncationRule r;
    r.kind = Kind::rank;
    r.rank = q;
    return r;
  }

  static TruncationRule Energy(double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
      throw config_error("pod: energy threshold must lie in (0, 1]");
    TruncationRule r;
    r.kind = Kind::energy;
    r.epsilon = eps;
    return r;
  }
};

struct PodResult {
  OrthonormalBasis modes;              // N x q spatial modes
  std::vector<double> singular_values; // q values, non-increasing
  Matrix temporal;                     // N_t x q right singular vectors
  double energy_fraction;              // retained sigma^2 over total sigma^2
  std::size_t retained_rank;           // may be below a requested Rank(q)
};

/// POD of a snapshot matrix (columns are time samples). Uses the method of
/// snapshots (Gram matrix on the time side) when N_t is much smaller than N,
/// direct thin SVD otherwise; the result contract is identical. Modes with
/// sigma_i < 1e-13 * sigma_1 are never retained.
inline PodResult compute_pod(const Matrix& snapshots, const TruncationRule& rule,
                             bool center = false) {
  snapshots.ensure_finite("pod");
  const std::size_t n = snapshots.rows();
  const std::size_t nt = snapshots.cols();
  const std::size_t kmax = std::min(n, nt);
  if (rule.kind == TruncationRule::Kind::rank && rule.rank > kmax)
    throw config_error("pod: requested rank " + std::to_string(rule.rank) +
                       " exceeds min(N, N_t) = " + std::to_string(kmax));

  Matrix s = snapshots;
  if (center) {
    for (std::size_t i = 0; i < n; ++i) {
      double mean = 0.0;
      for (std::size_t j = 0; j < nt; ++j) mean += s(i, j);
      mean /= static_cast<double>(nt);
      for (std::size_t j = 0; j < nt; ++j) s(i, j) -= mean;
    }
  }
  if (s.frobenius_norm() == 0.0)
    throw numerical_error("pod: snapshot matrix is identically zero");

  Matrix left(1, 1);
  Matrix right(1, 1);
  std::vector<double> sigma;
  if (n >= 2 * nt) {
    // Method of snapshots: eigen-decompose the N_t x N_t Gram matrix.
    const ThinSvd g = thin_svd(gram_product(s, s));
    sigma.resize(g.sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = std::sqrt(std::max(g.sigma[i], 0.0));
    right = g.v;
    std::vector<double> inv(sigma.size(), 0.0);
    const double cutoff = sigma.empty() ? 0.0 : sigma[0] * 1e-13;
    for (std::size_t i = 0; i < sigma.size(); ++i)
      if (sigma[i] > cutoff) inv[i] = 1.0 / sigma[i];
    left = scale_columns(s * right, inv);
  } else {
    const ThinSvd f = thin_svd(s);
    left = f.u;
    sigma = f.sigma;
    right = f.v;
  }

  double total = 0.0;
  for (double sv : sigma) total += sv * sv;
  const double cutoff = sigma[0] * 1e-13;

  std::size_t q = 0;
  if (rule.kind == TruncationRule::Kind::rank) {
    q = rule.rank;
  } else {
    double acc = 0.0;
    for (q = 0; q < sigma.size(); ++q) {
      acc += sigma[q] * sigma[q];
      if (acc / total >= rule.epsilon) {
        ++q;
        break;
      }
    }
  }
  while (q > 1 && sigma[q - 1] <= cutoff) --q;  // numerically zero modes are dropped
  if (sigma[0] <= cutoff || q == 0)
    throw numerical_error("pod: no retainable modes");

  Matrix modes(n, q);
  Matrix temporal(nt, q);
  std::vector<double> sv(sigma.begin(), sigma.begin() + static_cast<std::ptrdiff_t>(q));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j) modes(i, j) = left(i, j);
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < q; ++j) temporal(i, j) = right(i, j);

  double retained = 0.0;
  for (double x : sv) retained += x * x;

  // The Gram route loses orthonormality for small sigma; the QR pass keeps
  // column orientation (positive R diagonal) so mode/temporal pairing holds.
  return PodResult{OrthonormalBasis(qr_orthonormalize(modes)), std::move(sv),
                   qr_orthonormalize(temporal), retained / total, q};
}

}  // namespace grom
