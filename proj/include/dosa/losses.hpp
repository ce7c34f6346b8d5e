// Maximum-margin loss and its focal variant with a trainable per-class
// margin, gradient-stopped importance factor, and floor clamping.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dosa/matrix.hpp"
#include "dosa/tape.hpp"

namespace dosa {

enum class LossVariant { mm, fmm };

struct LossConfig {
  LossVariant variant = LossVariant::fmm;
  double importance_clamp_floor = 0.001;
  bool grad_through_importance = false;
  bool margin_trainable = true;  // forced false for mm
  // Eq-style ambiguity switch for the plain margin loss: per-sample squared
  // Euclidean norm (default) vs per-class terms.
  bool mm_per_class = false;

  static LossConfig mm_default() {
    LossConfig c;
    c.variant = LossVariant::mm;
    c.margin_trainable = false;
    return c;
  }
  static LossConfig fmm_default() { return LossConfig{}; }
};

// One margin value per class; fixed at 1 under the plain margin loss and
// trained under the focal variant. Grows when new classes arrive.
struct MarginVector {
  Parameter b;

  MarginVector() = default;
  MarginVector(std::size_t num_classes, bool trainable)
      : b(Matrix(1, num_classes, 1.0), trainable) {}

  std::size_t size() const { return b.value.cols; }

  void extend(std::size_t new_classes) {
    Matrix nv(1, size() + new_classes, 1.0);
    for (std::size_t j = 0; j < size(); ++j) nv.at(0, j) = b.value.at(0, j);
    bool trainable = b.trainable;
    b = Parameter(std::move(nv), trainable);
  }
};

inline void require_bipolar(const Matrix& y, const char* where) {
  for (std::size_t i = 0; i < y.v.size(); ++i)
    if (y.v[i] != 1.0 && y.v[i] != -1.0)
      throw std::domain_error(std::string(where) + ": label entry " +
                              std::to_string(i) + " = " +
                              std::to_string(y.v[i]) + " not in {-1,+1}");
}

// Classification confidence: zeta = y ⊙ (y_plus - y_minus). Positive where
// the model agrees with the ground truth.
inline Var zeta(Tape& tape, const Matrix& y, Var y_plus, Var y_minus) {
  require_bipolar(y, "zeta");
  mat::require_same_shape(y, tape.val(y_plus), "zeta");
  mat::require_same_shape(y, tape.val(y_minus), "zeta");
  Var yc = tape.constant(y);
  return tape.mul(yc, tape.sub(y_plus, y_minus));
}

// L_mm = sum_k exp(||zeta_k - b||^2): the exponential of each sample's
// squared distance to the margin, summed over samples. With mm_per_class the
// exp is applied per class term instead.
inline Var loss_mm(Tape& tape, Var zeta_v, Var margin_row,
                   bool per_class = false) {
  Var d = tape.sub_row(zeta_v, margin_row);
  Var sq = tape.square(d);
  if (per_class) return tape.sum(tape.exp_(sq));
  return tape.sum(tape.exp_(tape.row_sum(sq)));
}

// L_fmm = sum over samples and classes of
//   clamp_min(exp(-(zeta - b)), floor) * (zeta - b)^2
// The importance factor is a pure weight by default: gradients do not flow
// through it unless cfg.grad_through_importance is set.
inline Var loss_fmm(Tape& tape, Var zeta_v, Var margin_row,
                    const LossConfig& cfg) {
  Var d = tape.sub_row(zeta_v, margin_row);
  Var factor =
      tape.clamp_min(tape.exp_(tape.neg(d)), cfg.importance_clamp_floor);
  if (!cfg.grad_through_importance) factor = tape.stop_gradient(factor);
  return tape.sum(tape.mul(factor, tape.square(d)));
}

inline Var loss(Tape& tape, Var zeta_v, Var margin_row,
                const LossConfig& cfg) {
  return cfg.variant == LossVariant::mm
             ? loss_mm(tape, zeta_v, margin_row, cfg.mm_per_class)
             : loss_fmm(tape, zeta_v, margin_row, cfg);
}

// |b_k| / sum_j |b_j|
inline std::vector<double> normalized_margins(const MarginVector& m) {
  double total = 0.0;
  for (double x : m.b.value.v) total += std::fabs(x);
  if (total == 0.0)
    throw std::domain_error("normalized_margins: all-zero margin vector");
  std::vector<double> out;
  out.reserve(m.size());
  for (double x : m.b.value.v) out.push_back(std::fabs(x) / total);
  return out;
}

}  // namespace dosa
