// Non-spiking readout: accumulates potential over the simulation window and
// averages tanh(P_t), so per-class scores land in (-1, 1).
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "dosa/matrix.hpp"
#include "dosa/rng.hpp"
#include "dosa/tape.hpp"

namespace dosa {

class AccumulatorHead {
 public:
  Parameter weights;  // fan_in x r
  Parameter bias;     // 1 x r

  AccumulatorHead() = default;
  AccumulatorHead(std::size_t fan_in, std::size_t num_outputs, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    weights =
        Parameter(rng.uniform_matrix(fan_in, num_outputs, -bound, bound));
    bias = Parameter(Matrix(1, num_outputs));
  }

  std::size_t fan_in() const { return weights.value.rows; }
  std::size_t num_outputs() const { return weights.value.cols; }

  void reset_state(Tape& tape, std::size_t batch) {
    potential_ = tape.constant(Matrix(batch, num_outputs()));
    tanh_sum_ = tape.constant(Matrix(batch, num_outputs()));
    steps_ = 0;
  }

  // P_t = P_{t-1} + spikes W + bias; the tanh of each step's potential is
  // summed for the final average.
  void step(Tape& tape, Var spikes) {
    Var w = tape.param(weights);
    Var b = tape.param(bias);
    potential_ = tape.add(potential_,
                          tape.add_row(tape.matmul(spikes, w), b));
    tanh_sum_ = tape.add(tanh_sum_, tape.tanh_(potential_));
    ++steps_;
  }

  // (1/T) sum_t tanh(P_t)
  Var finish(Tape& tape) const {
    if (steps_ == 0)
      throw std::logic_error("AccumulatorHead: finish before any step");
    return tape.mul_const(tanh_sum_, 1.0 / static_cast<double>(steps_));
  }

 private:
  Var potential_;
  Var tanh_sum_;
  std::size_t steps_ = 0;
};

}  // namespace dosa
