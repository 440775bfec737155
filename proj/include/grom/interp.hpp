#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "grom/errors.hpp"
#include "grom/matrix.hpp"
#include "grom/solve.hpp"

namespace grom {

enum class RbfKernel { gaussian, thin_plate, multiquadric };

/// Scalar-family interpolator applied entrywise to tangent coordinates and
/// singular values. Lagrange is restricted to 1-D parameters.
struct TangentInterpolator {
  enum class Kind { lagrange, rbf, idw };

  Kind kind = Kind::lagrange;
  RbfKernel kernel = RbfKernel::gaussian;
  double shape = 1.0;   // RBF length scale, > 0
  double power = 2.0;   // IDW exponent, > 0

  static TangentInterpolator Lagrange() { return {}; }

  static TangentInterpolator Rbf(RbfKernel k, double shape) {
    if (!(shape > 0.0)) throw config_error("interp: RBF shape must be positive");
    TangentInterpolator t;
    t.kind = Kind::rbf;
    t.kernel = k;
    t.shape = shape;
    return t;
  }

  static TangentInterpolator Idw(double power) {
    if (!(power > 0.0)) throw config_error("interp: IDW power must be positive");
    TangentInterpolator t;
    t.kind = Kind::idw;
    t.power = power;
    return t;
  }
};

namespace detail {

inline double param_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double rbf_phi(RbfKernel kernel, double r, double shape) {
  const double x = r / shape;
  switch (kernel) {
    case RbfKernel::gaussian:
      return std::exp(-x * x);
    case RbfKernel::thin_plate:
      return x > 0.0 ? x * x * std::log(x) : 0.0;
    case RbfKernel::multiquadric:
      return std::sqrt(1.0 + x * x);
  }
  return 0.0;
}

}  // namespace detail

/// Mean pairwise parameter distance: the documented default RBF shape.
inline double mean_pairwise_distance(const std::vector<std::vector<double>>& params) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < params.size(); ++i)
    for (std::size_t j = i + 1; j < params.size(); ++j) {
      sum += detail::param_distance(params[i], params[j]);
      ++count;
    }
  return count ? sum / static_cast<double>(count) : 1.0;
}

/// Weights w_i(query) such that the interpolant of any scalar family {f_i}
/// is sum_i w_i f_i. All three interpolator kinds are linear in the data, so
/// one weight vector serves every entry of a tangent matrix.
inline std::vector<double> interpolation_weights(const TangentInterpolator& method,
                                                 const std::vector<std::vector<double>>& params,
                                                 const std::vector<double>& query) {
  const std::size_t np = params.size();
  if (np == 0) throw config_error("interp: no sample parameters");
  for (const auto& p : params)
    if (p.size() != query.size())
      throw config_error("interp: parameter dimension mismatch (" +
                         std::to_string(p.size()) + " vs " + std::to_string(query.size()) + ")");

  std::vector<double> w(np, 0.0);
  switch (method.kind) {
    case TangentInterpolator::Kind::lagrange: {
      if (query.size() != 1)
        throw config_error("interp: Lagrange interpolation requires 1-D parameters, got d=" +
                           std::to_string(query.size()));
      for (std::size_t i = 0; i < np; ++i) {
        double prod = 1.0;
        for (std::size_t j = 0; j < np; ++j) {
          if (j == i) continue;
          const double denom = params[i][0] - params[j][0];
          if (denom == 0.0)
            throw numerical_error("interp: duplicate Lagrange nodes at samples " +
                                  std::to_string(i) + " and " + std::to_string(j));
          prod *= (query[0] - params[j][0]) / denom;
        }
        w[i] = prod;
      }
      break;
    }
    case TangentInterpolator::Kind::rbf: {
      Matrix k(np, np);
      for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < np; ++j)
          k(i, j) = detail::rbf_phi(method.kernel,
                                    detail::param_distance(params[i], params[j]),
                                    method.shape);
      Matrix rhs(np, 1);
      for (std::size_t i = 0; i < np; ++i)
        rhs(i, 0) = detail::rbf_phi(method.kernel,
                                    detail::param_distance(params[i], query), method.shape);
      Matrix sol;
      try {
        sol = solve_square(k, rhs);  // K symmetric: K^{-1} k(query)
      } catch (const numerical_error& e) {
        throw numerical_error(std::string("interp: singular RBF kernel matrix (") +
                              e.what() + ")");
      }
      for (std::size_t i = 0; i < np; ++i) w[i] = sol(i, 0);
      break;
    }
    case TangentInterpolator::Kind::idw: {
      // Exact-match short-circuit handles the removable singularity.
      for (std::size_t i = 0; i < np; ++i)
        if (detail::param_distance(params[i], query) <= 1e-14) {
          w[i] = 1.0;
          return w;
        }
      double total = 0.0;
      for (std::size_t i = 0; i < np; ++i) {
        w[i] = std::pow(detail::param_distance(params[i], query), -method.power);
        total += w[i];
      }
      for (double& x : w) x /= total;
      break;
    }
  }
  return w;
}

/// Index of the trained parameter nearest to the query (Euclidean).
inline std::size_t nearest_parameter_index(const std::vector<std::vector<double>>& params,
                                           const std::vector<double>& query) {
  std::size_t best = 0;
  double best_d = detail::param_distance(params[0], query);
  for (std::size_t i = 1; i < params.size(); ++i) {
    const double d = detail::param_distance(params[i], query);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace grom
