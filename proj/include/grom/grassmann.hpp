#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "grom/errors.hpp"
#include "grom/matrix.hpp"
#include "grom/qr.hpp"
#include "grom/solve.hpp"
#include "grom/svd.hpp"

namespace grom {

namespace detail {
struct TrustedBasisAccess;
}

/// An N x q matrix with orthonormal columns; a representative of the point
/// [Phi] on the Grassmann manifold. Validated on construction.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(Matrix phi) : phi_(std::move(phi)) {
    phi_.ensure_finite("grassmann: basis");
    if (phi_.rows() <= phi_.cols())
      throw numerical_error("grassmann: basis must be tall, got " + phi_.shape_string());
    const Matrix g = gram_product(phi_, phi_);
    double err = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) {
        const double d = g(i, j) - (i == j ? 1.0 : 0.0);
        err += d * d;
      }
    if (std::sqrt(err) > 1e-10)
      throw numerical_error("grassmann: columns not orthonormal, ||Phi^T Phi - I||_F = " +
                            std::to_string(std::sqrt(err)));
  }

  const Matrix& matrix() const { return phi_; }
  std::size_t ambient_dim() const { return phi_.rows(); }
  std::size_t subspace_dim() const { return phi_.cols(); }

 private:
  struct trusted_tag {};
  OrthonormalBasis(Matrix phi, trusted_tag) : phi_(std::move(phi)) {}
  friend struct detail::TrustedBasisAccess;

  Matrix phi_;
};

namespace detail {

struct TrustedBasisAccess {
  static OrthonormalBasis make(Matrix phi) {
    return OrthonormalBasis(std::move(phi), OrthonormalBasis::trusted_tag{});
  }
};

/// Wraps a matrix that is orthonormal by construction (orthonormalizer
/// output, or an orthonormal basis times an orthogonal matrix) without the
/// O(N q^2) validation pass. Callers are responsible for the invariant.
inline OrthonormalBasis trusted_basis(Matrix phi) {
  return TrustedBasisAccess::make(std::move(phi));
}

}  // namespace detail

/// Horizontal tangent vector delta at a base point: base^T * delta = 0.
class TangentVector {
 public:
  TangentVector(OrthonormalBasis base, Matrix delta)
      : base_(std::move(base)), delta_(std::move(delta)) {
    delta_.ensure_finite("grassmann: tangent");
    if (delta_.rows() != base_.ambient_dim() || delta_.cols() != base_.subspace_dim())
      throw numerical_error("grassmann: tangent shape " + delta_.shape_string() +
                            " does not match base " + base_.matrix().shape_string());
    const double h = gram_product(base_.matrix(), delta_).frobenius_norm();
    if (h > 1e-8 * std::max(1.0, delta_.frobenius_norm()))
      throw numerical_error("grassmann: tangent vector is not horizontal, ||B^T D||_F = " +
                            std::to_string(h));
  }

  static TangentVector zero(const OrthonormalBasis& base) {
    return TangentVector(base, Matrix(base.ambient_dim(), base.subspace_dim()));
  }

  const OrthonormalBasis& base() const { return base_; }
  const Matrix& delta() const { return delta_; }
  double norm() const { return delta_.frobenius_norm(); }

 private:
  OrthonormalBasis base_;
  Matrix delta_;
};

/// Canonical angles between two subspaces, non-decreasing in [0, pi/2].
struct PrincipalAngles {
  std::vector<double> thetas;
};

namespace detail {

inline void check_same_grassmann(const OrthonormalBasis& x, const OrthonormalBasis& y,
                                 const char* op) {
  if (x.ambient_dim() != y.ambient_dim() || x.subspace_dim() != y.subspace_dim())
    throw numerical_error(std::string("grassmann: ") + op + " dimension mismatch " +
                          x.matrix().shape_string() + " vs " + y.matrix().shape_string());
}

}  // namespace detail

/// arccos of the singular values of x^T y, clamped into [0,1] first (floating
/// point can push them past 1 by ~1e-15 and arccos would return NaN). Small
/// angles are recomputed through the sine route, asin of the singular values
/// of y - x (x^T y): arccos near 1 cannot resolve angles below ~1e-8.
inline PrincipalAngles principal_angles(const OrthonormalBasis& x,
                                        const OrthonormalBasis& y) {
  detail::check_same_grassmann(x, y, "principal angles");
  const Matrix cross = gram_product(x.matrix(), y.matrix());
  const ThinSvd cos_svd = thin_svd(cross);
  Matrix residual = y.matrix();
  residual -= x.matrix() * cross;
  const ThinSvd sin_svd = thin_svd(residual);
  const std::size_t q = cos_svd.sigma.size();
  PrincipalAngles out;
  out.thetas.reserve(q);
  for (std::size_t i = 0; i < q; ++i) {
    const double c = std::clamp(cos_svd.sigma[i], 0.0, 1.0);       // non-increasing
    const double s = std::clamp(sin_svd.sigma[q - 1 - i], 0.0, 1.0);  // matching sine
    out.thetas.push_back(c * c > 0.5 ? std::asin(s) : std::acos(c));
  }
  return out;
}

/// Geodesic distance: sqrt of the sum of squared principal angles.
inline double geodesic_distance(const OrthonormalBasis& x, const OrthonormalBasis& y) {
  const PrincipalAngles pa = principal_angles(x, y);
  double s = 0.0;
  for (double t : pa.thetas) s += t * t;
  return std::sqrt(s);
}

/// Logarithmic map: the initial velocity of the geodesic from [base] to
/// [target], U arctan(S) V^T with U S V^T the thin SVD of
/// (I - base base^T) target (base^T target)^{-1}. Exact zero for identical
/// representatives. Throws when base^T target is (near-)singular, i.e. the
/// target is outside the neighborhood where the log map is defined.
inline TangentVector log_map(const OrthonormalBasis& base, const OrthonormalBasis& target) {
  detail::check_same_grassmann(base, target, "log map");
  if (base.matrix().same_entries(target.matrix())) return TangentVector::zero(base);

  const Matrix m = gram_product(base.matrix(), target.matrix());  // q x q
  Matrix w;
  try {
    // target * m^{-1}, via m^T x^T = target^T.
    w = solve_square(m.transpose(), target.matrix().transpose()).transpose();
  } catch (const numerical_error& e) {
    throw numerical_error(std::string("grassmann: outside logarithm neighborhood (") +
                          e.what() + ")");
  }
  Matrix proj = w;
  proj -= base.matrix() * gram_product(base.matrix(), w);
  const ThinSvd s = thin_svd(proj);
  std::vector<double> ang(s.sigma.size());
  for (std::size_t i = 0; i < ang.size(); ++i) ang[i] = std::atan(s.sigma[i]);
  return TangentVector(base, product_transposed(scale_columns(s.u, ang), s.v));
}

/// Exponential map: endpoint of the geodesic launched from base with the
/// given initial velocity, base V cos(S) + U sin(S) with U S V^T the thin
/// SVD of the velocity, re-orthonormalized (the formula is orthonormal only
/// in exact arithmetic).
inline OrthonormalBasis exp_map(const OrthonormalBasis& base, const TangentVector& velocity) {
  if (!velocity.base().matrix().same_entries(base.matrix())) {
    Matrix diff = velocity.base().matrix();
    diff -= base.matrix();
    if (diff.max_abs() > 1e-12)
      throw numerical_error("grassmann: exp map called with a velocity attached to a "
                            "different base point");
  }
  const ThinSvd s = thin_svd(velocity.delta());
  std::vector<double> cs(s.sigma.size()), sn(s.sigma.size());
  for (std::size_t i = 0; i < s.sigma.size(); ++i) {
    cs[i] = std::cos(s.sigma[i]);
    sn[i] = std::sin(s.sigma[i]);
  }
  Matrix out = scale_columns(base.matrix() * s.v, cs);
  out += scale_columns(s.u, sn);
  return detail::trusted_basis(reorthonormalize_nearly(out));
}

}  // namespace grom
