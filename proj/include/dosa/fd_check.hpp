// Central-difference gradient oracle, independent of the tape's backward
// rules. build_loss must be a deterministic function of the parameter values
// (fix any RNG state before capturing it).
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "dosa/matrix.hpp"
#include "dosa/tape.hpp"

namespace dosa {

// Returns max over all trainable coordinates of
//   |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
inline double finite_difference_check(
    const std::function<Var(Tape&)>& build_loss,
    const std::vector<Parameter*>& params, double h = 1e-4) {
  if (h <= 0.0) throw std::invalid_argument("finite_difference_check: h <= 0");

  auto eval = [&]() {
    Tape t;
    Var out = build_loss(t);
    const Matrix& o = t.val(out);
    if (o.rows != 1 || o.cols != 1)
      throw std::invalid_argument("finite_difference_check: loss not scalar");
    if (!std::isfinite(o.v[0]))
      throw std::runtime_error("finite_difference_check: non-finite loss");
    return o.v[0];
  };

  zero_grads(params);
  {
    Tape t;
    Var out = build_loss(t);
    t.backward(out);
  }
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (auto* p : params) analytic.push_back(p->grad);

  double max_rel = 0.0;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter* p = params[pi];
    if (!p->trainable) continue;
    for (std::size_t i = 0; i < p->value.v.size(); ++i) {
      const double saved = p->value.v[i];
      p->value.v[i] = saved + h;
      const double fp = eval();
      p->value.v[i] = saved - h;
      const double fm = eval();
      p->value.v[i] = saved;
      const double numeric = (fp - fm) / (2.0 * h);
      const double a = analytic[pi].v[i];
      const double denom =
          std::max({std::fabs(a), std::fabs(numeric), 1e-8});
      max_rel = std::max(max_rel, std::fabs(a - numeric) / denom);
    }
  }
  return max_rel;
}

}  // namespace dosa
