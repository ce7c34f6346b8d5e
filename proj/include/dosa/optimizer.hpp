// Adam with bias correction; moments are keyed by parameter identity.
#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dosa/matrix.hpp"

namespace dosa {

class Adam {
 public:
  explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  std::int64_t steps() const { return step_; }
  double learning_rate() const { return lr_; }

  void step(const std::vector<Parameter*>& params) {
    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    for (auto* p : params) {
      if (!p->trainable) continue;
      Moments& m = moments_[p];
      if (m.m1.size() != p->value.size()) {
        m.m1 = Matrix(p->value.rows, p->value.cols);
        m.m2 = Matrix(p->value.rows, p->value.cols);
      }
      for (std::size_t i = 0; i < p->value.v.size(); ++i) {
        const double g = p->grad.v[i];
        m.m1.v[i] = beta1_ * m.m1.v[i] + (1.0 - beta1_) * g;
        m.m2.v[i] = beta2_ * m.m2.v[i] + (1.0 - beta2_) * g * g;
        const double mhat = m.m1.v[i] / bc1;
        const double vhat = m.m2.v[i] / bc2;
        if (mhat == 0.0 && vhat == 0.0) continue;  // zero grad, zero moments
        p->value.v[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

 private:
  struct Moments {
    Matrix m1, m2;
  };

  double lr_, beta1_, beta2_, eps_;
  std::int64_t step_ = 0;
  std::unordered_map<Parameter*, Moments> moments_;
};

}  // namespace dosa
