// Shared optimization loop for one model on one set of samples.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dosa/dataset.hpp"
#include "dosa/losses.hpp"
#include "dosa/matrix.hpp"
#include "dosa/model.hpp"
#include "dosa/optimizer.hpp"
#include "dosa/rng.hpp"

namespace dosa {

struct TrainOptions {
  std::size_t epochs = 100;
  double learning_rate = 0.001;
  std::size_t batch_size = 0;  // 0 = full batch
};

struct TrainLog {
  std::vector<double> epoch_loss;           // summed over samples
  std::vector<double> epoch_loss_per_sample;
  bool saturated = false;
};

// Runs `epochs` passes of Adam over (features, labels). Spike noise is
// resampled every epoch from the given rng, so a fixed rng state replays the
// run exactly.
inline TrainLog train_model(DosaModel& model, MarginVector& margin,
                            const Matrix& features, const Matrix& labels,
                            const LossConfig& loss_cfg,
                            const TrainOptions& opts, Rng& rng) {
  require_bipolar(labels, "train_model");
  TrainLog log;
  if (opts.epochs == 0) return log;
  Adam opt(opts.learning_rate);
  auto params = model.parameters();
  params.push_back(&margin.b);

  const std::size_t n = features.rows;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch =
      opts.batch_size == 0 ? n : std::min(opts.batch_size, n);

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    if (batch < n) rng.shuffle(order.begin(), order.end());
    double total = 0.0;
    for (std::size_t off = 0; off < n; off += batch) {
      const std::size_t cur = std::min(batch, n - off);
      std::vector<std::size_t> idx(order.begin() + off,
                                   order.begin() + off + cur);
      Matrix bx = take_rows(features, idx);
      Matrix by = take_rows(labels, idx);

      Tape tape;
      DualScores s = model.forward(tape, bx, rng);
      Var z = zeta(tape, by, s.y_plus, s.y_minus);
      Var b_row = tape.param(margin.b);
      Var l = loss(tape, z, b_row, loss_cfg);
      const double lv = tape.val(l).v[0];
      if (!std::isfinite(lv))
        throw std::runtime_error(
            "train_model: non-finite loss at epoch " + std::to_string(epoch) +
            (tape.saturated() ? " (exponent saturation hit)" : ""));
      if (tape.saturated()) log.saturated = true;
      total += lv;
      zero_grads(params);
      tape.backward(l);
      opt.step(params);
    }
    log.epoch_loss.push_back(total);
    log.epoch_loss_per_sample.push_back(total / static_cast<double>(n));
  }
  zero_grads(params);
  return log;
}

}  // namespace dosa
