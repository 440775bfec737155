#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <vector>

#include "grom/bicitsgm.hpp"
#include "grom/errors.hpp"
#include "grom/interp.hpp"
#include "grom/matrix.hpp"

namespace grom {

/// Fitness oracle of the reduced GA: genes -> negated relative squared field
/// mismatch, -||bi_query(model, genes).field - target||_F^2 / ||target||_F^2.
/// Pure in its result and safe for concurrent evaluation; queries outside the
/// trained parameter hull are still defined (extrapolation) but counted.
class ReducedFitness {
 public:
  ReducedFitness(const BiRomModel& model, Matrix target_field, TangentInterpolator method)
      : model_(&model),
        target_(std::move(target_field)),
        method_(method),
        target_norm2_(target_.frobenius_norm() * target_.frobenius_norm()),
        outside_hull_(std::make_shared<std::atomic<std::size_t>>(0)) {
    if (target_.rows() != model.samples().spatial_dim() ||
        target_.cols() != model.samples().temporal_dim())
      throw config_error("reduced-ga: target field shape " + target_.shape_string() +
                         " does not match the model (" +
                         std::to_string(model.samples().spatial_dim()) + "x" +
                         std::to_string(model.samples().temporal_dim()) + ")");
    if (target_norm2_ == 0.0)
      throw config_error("reduced-ga: target field is identically zero");
    const std::size_t d = model.samples().param_dim();
    hull_lo_.assign(d, 0.0);
    hull_hi_.assign(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      hull_lo_[k] = hull_hi_[k] = model.samples().params().front()[k];
      for (const auto& p : model.samples().params()) {
        hull_lo_[k] = std::min(hull_lo_[k], p[k]);
        hull_hi_[k] = std::max(hull_hi_[k], p[k]);
      }
    }
  }

  double operator()(const std::vector<double>& genes) const {
    for (std::size_t k = 0; k < genes.size(); ++k)
      if (genes[k] < hull_lo_[k] || genes[k] > hull_hi_[k]) {
        outside_hull_->fetch_add(1, std::memory_order_relaxed);
        break;
      }
    const Reconstruction rec = bi_query(*model_, genes, method_);
    Matrix diff = rec.field;
    diff -= target_;
    const double err = diff.frobenius_norm();
    return -(err * err) / target_norm2_;
  }

  /// Number of fitness evaluations whose genes left the trained hull.
  std::size_t evaluations_outside_hull() const { return outside_hull_->load(); }

 private:
  const BiRomModel* model_;
  Matrix target_;
  TangentInterpolator method_;
  double target_norm2_;
  std::vector<double> hull_lo_, hull_hi_;
  std::shared_ptr<std::atomic<std::size_t>> outside_hull_;
};

inline ReducedFitness reduced_fitness(const BiRomModel& model, Matrix target_field,
                                      const TangentInterpolator& method) {
  return ReducedFitness(model, std::move(target_field), method);
}

}  // namespace grom
