#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "grom/errors.hpp"
#include "grom/grassmann.hpp"
#include "grom/interp.hpp"
#include "grom/matrix.hpp"
#include "grom/svd.hpp"

namespace grom {

/// One trained sample: the thin-SVD triple of its snapshot matrix.
struct SvdTriple {
  OrthonormalBasis u;          // N x q spatial basis
  std::vector<double> sigma;   // q singular values
  OrthonormalBasis v;          // N_t x q temporal basis
};

/// Trained parameters with their per-sample SVD triples: the interpolation
/// database. All samples must share N, N_t and q.
class SampleSet {
 public:
  SampleSet(std::vector<std::vector<double>> params, std::vector<SvdTriple> triples)
      : params_(std::move(params)), triples_(std::move(triples)) {
    if (params_.size() != triples_.size())
      throw config_error("samples: parameter/triple count mismatch");
    if (params_.size() < 2)
      throw config_error("samples: at least two samples are required, got " +
                         std::to_string(params_.size()));
    const std::size_t d = params_.front().size();
    if (d == 0) throw config_error("samples: empty parameter vector");
    for (const auto& p : params_)
      if (p.size() != d) throw config_error("samples: inconsistent parameter dimension");
    for (std::size_t i = 0; i < params_.size(); ++i)
      for (std::size_t j = i + 1; j < params_.size(); ++j)
        if (params_[i] == params_[j])
          throw config_error("samples: duplicate parameters at indices " +
                             std::to_string(i) + " and " + std::to_string(j));
    const SvdTriple& t0 = triples_.front();
    for (const SvdTriple& t : triples_) {
      if (t.u.ambient_dim() != t0.u.ambient_dim() ||
          t.u.subspace_dim() != t0.u.subspace_dim() ||
          t.v.ambient_dim() != t0.v.ambient_dim() ||
          t.v.subspace_dim() != t0.v.subspace_dim() ||
          t.sigma.size() != t0.u.subspace_dim())
        throw config_error("samples: inconsistent sample shapes (all samples must share "
                           "N, N_t and q)");
    }
  }

  std::size_t size() const { return params_.size(); }
  std::size_t param_dim() const { return params_.front().size(); }
  std::size_t spatial_dim() const { return triples_.front().u.ambient_dim(); }
  std::size_t temporal_dim() const { return triples_.front().v.ambient_dim(); }
  std::size_t rank() const { return triples_.front().u.subspace_dim(); }

  const std::vector<std::vector<double>>& params() const { return params_; }
  const std::vector<SvdTriple>& triples() const { return triples_; }
  const SvdTriple& triple(std::size_t i) const { return triples_.at(i); }

 private:
  std::vector<std::vector<double>> params_;
  std::vector<SvdTriple> triples_;
};

/// Cached initial velocities X_i = Log_{U_ref}(U_i) in the tangent space at
/// the reference sample. Immutable once built.
struct TangentCache {
  std::size_t ref_index;
  std::vector<TangentVector> velocities;  // one per sample, zero at ref_index
};

/// Offline stage over an arbitrary basis family: log-map every member into
/// the tangent space at family[ref_index]. `tag` labels errors ("spatial",
/// "temporal", ...).
inline TangentCache tangent_offline(const std::vector<OrthonormalBasis>& family,
                                    std::size_t ref_index, const std::string& tag) {
  if (ref_index >= family.size())
    throw config_error("itsgm: reference index " + std::to_string(ref_index) +
                       " out of range (" + std::to_string(family.size()) + " samples)");
  TangentCache cache;
  cache.ref_index = ref_index;
  const OrthonormalBasis& ref = family[ref_index];
  cache.velocities.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i == ref_index) {
      cache.velocities.push_back(TangentVector::zero(ref));
      continue;
    }
    try {
      cache.velocities.push_back(log_map(ref, family[i]));
    } catch (const numerical_error&) {
      const ThinSvd s = thin_svd(gram_product(ref.matrix(), family[i].matrix()));
      throw numerical_error("itsgm: " + tag + " sample " + std::to_string(i) +
                            " lies outside the logarithm neighborhood of reference " +
                            std::to_string(ref_index) + " (min singular value of the "
                            "cross-Gram matrix: " + std::to_string(s.sigma.back()) + ")");
    }
  }
  return cache;
}

/// Algorithm steps 1-2: choose the origin of tangency and map every trained
/// subspace to its initial velocity.
inline TangentCache itsgm_offline(const SampleSet& samples, std::size_t ref_index) {
  std::vector<OrthonormalBasis> family;
  family.reserve(samples.size());
  for (const SvdTriple& t : samples.triples()) family.push_back(t.u);
  return tangent_offline(family, ref_index, "spatial");
}

/// Step 3: entrywise scalar interpolation of the cached velocities at gamma.
inline TangentVector interpolate_tangent(const TangentCache& cache,
                                         const std::vector<std::vector<double>>& params,
                                         const std::vector<double>& gamma,
                                         const TangentInterpolator& method) {
  const std::vector<double> w = interpolation_weights(method, params, gamma);
  Matrix delta(cache.velocities.front().delta().rows(),
               cache.velocities.front().delta().cols());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    delta += w[i] * cache.velocities[i].delta();
  }
  return TangentVector(cache.velocities[cache.ref_index].base(), std::move(delta));
}

inline TangentVector interpolate_tangent(const TangentCache& cache, const SampleSet& samples,
                                         const std::vector<double>& gamma,
                                         const TangentInterpolator& method) {
  return interpolate_tangent(cache, samples.params(), gamma, method);
}

/// Online stage against a prebuilt cache: interpolate then map back.
inline OrthonormalBasis itsgm_query(const TangentCache& cache, const SampleSet& samples,
                                    const std::vector<double>& gamma,
                                    const TangentInterpolator& method) {
  const TangentVector vel = interpolate_tangent(cache, samples, gamma, method);
  return exp_map(vel.base(), vel);
}

/// Steps 1-4 in one call: offline cache, velocity interpolation at gamma,
/// exponential map back to the manifold.
inline OrthonormalBasis itsgm_interpolate(const SampleSet& samples,
                                          const std::vector<double>& gamma,
                                          std::size_t ref_index,
                                          const TangentInterpolator& method) {
  const TangentCache cache = itsgm_offline(samples, ref_index);
  const TangentVector vel = interpolate_tangent(cache, samples, gamma, method);
  return exp_map(samples.triple(ref_index).u, vel);
}

}  // namespace grom
