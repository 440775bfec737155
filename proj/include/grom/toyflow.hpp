#pragma once

#include <cmath>
#include <string>

#include "grom/errors.hpp"
#include "grom/grassmann.hpp"
#include "grom/matrix.hpp"

namespace grom {

/// Analytic parametric snapshot family: a Gaussian pulse on [0,1] translating
/// with speed gamma, u(x_j, t_k; gamma) = exp(-(x_j - gamma t_k)^2 / width^2)
/// with x_j and t_k uniform on [0,1]. Valid for gamma in [0,1] (the pulse
/// center stays inside the domain).
struct TranslatingPulse {
  std::size_t grid_points = 512;
  std::size_t timesteps = 128;
  double width = 0.35;
};

inline Matrix generate_snapshots(const TranslatingPulse& family, double gamma) {
  if (!(family.width > 0.0)) throw config_error("toyflow: pulse width must be positive");
  if (family.grid_points < 2 || family.timesteps < 1)
    throw config_error("toyflow: pulse grid too small");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw config_error("toyflow: pulse speed gamma must lie in [0,1], got " +
                       std::to_string(gamma));
  const std::size_t n = family.grid_points;
  const std::size_t nt = family.timesteps;
  Matrix s(n, nt);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < nt; ++k) {
      const double t = nt == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(nt - 1);
      const double r = (x - gamma * t) / family.width;
      s(j, k) = std::exp(-r * r);
    }
  }
  return s;
}

/// Exact geodesic family on the Grassmann manifold: the first column rotates
/// in the (e1, e2) plane with angle gamma, the remaining q-1 columns are
/// fixed coordinate directions e3..e_{q+1}. Pairwise geodesic distances equal
/// |gamma_a - gamma_b| (one nonzero principal angle).
struct RotatingSubspace {
  std::size_t dim = 16;  // N, must exceed rank + 1
  std::size_t rank = 3;  // q
};

inline OrthonormalBasis exact_subspace(const RotatingSubspace& family, double gamma) {
  if (family.rank < 1 || family.dim <= family.rank + 1)
    throw config_error("toyflow: rotating family needs N > q + 1");
  Matrix phi(family.dim, family.rank);
  phi(0, 0) = std::cos(gamma);
  phi(1, 0) = std::sin(gamma);
  for (std::size_t j = 1; j < family.rank; ++j) phi(1 + j, j) = 1.0;
  return OrthonormalBasis(std::move(phi));
}

}  // namespace grom
