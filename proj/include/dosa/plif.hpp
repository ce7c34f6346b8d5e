// Parametric leaky integrate-and-fire layer. The membrane time constant is
// learned through tau_raw with 1/tau = sigmoid(tau_raw); spikes use a hard
// threshold forward and an arctangent surrogate backward.
#pragma once

#include <cmath>
#include <cstddef>

#include "dosa/matrix.hpp"
#include "dosa/rng.hpp"
#include "dosa/tape.hpp"

namespace dosa {

// tau_raw value giving tau = 2 (sigmoid(tau_raw) = 0.5).
inline constexpr double kTauRawForTau2 = 0.0;

class PlifLayer {
 public:
  Parameter weights;  // fan_in x fan_out
  Parameter bias;     // 1 x fan_out
  Parameter tau_raw;  // 1 x 1 shared across the layer
  double v_threshold = 1.0;
  double v_reset = 0.0;
  double surrogate_alpha = 2.0;

  PlifLayer() = default;
  PlifLayer(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    weights = Parameter(rng.uniform_matrix(fan_in, fan_out, -bound, bound));
    bias = Parameter(Matrix(1, fan_out));
    tau_raw = Parameter(Matrix(1, 1, kTauRawForTau2));
  }

  std::size_t fan_in() const { return weights.value.rows; }
  std::size_t fan_out() const { return weights.value.cols; }

  // Membrane state starts at v_reset for every sample batch.
  void reset_state(Tape& tape, std::size_t batch) {
    membrane_ = tape.constant(Matrix(batch, fan_out(), v_reset));
  }

  // One simulation step:
  //   I_t = spikes W + bias
  //   H_t = V_{t-1} + sigmoid(tau_raw) (I_t - (V_{t-1} - V_reset))
  //   S_t = Heaviside(H_t - V_th)          (surrogate backward)
  //   V_t = H_t (1 - S_t) + V_reset S_t    (hard reset)
  Var step(Tape& tape, Var in_spikes, bool smooth_forward = false) {
    Var w = tape.param(weights);
    Var b = tape.param(bias);
    Var current = tape.add_row(tape.matmul(in_spikes, w), b);
    Var inv_tau = tape.sigmoid_(tape.param(tau_raw));
    Var leak = tape.add_const(membrane_, -v_reset);
    Var charged = tape.add(
        membrane_, tape.scalar_mul(inv_tau, tape.sub(current, leak)));
    Var spikes = tape.heaviside(tape.add_const(charged, -v_threshold),
                                surrogate_alpha, smooth_forward);
    Var not_spiked = tape.add_const(tape.neg(spikes), 1.0);
    membrane_ = tape.add(tape.mul(charged, not_spiked),
                         tape.mul_const(spikes, v_reset));
    return spikes;
  }

 private:
  Var membrane_;
};

}  // namespace dosa
