// Sequential Learning with Model Adaptation: per-task training with
// missing-label augmentation by the previous model, head expansion for new
// classes, and no access to earlier tasks' samples.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dosa/dataset.hpp"
#include "dosa/losses.hpp"
#include "dosa/matrix.hpp"
#include "dosa/metrics.hpp"
#include "dosa/model.hpp"
#include "dosa/trainer.hpp"

namespace dosa {

struct TaskData {
  Matrix features;  // scaled to [0,1]
  Matrix labels;    // bipolar, this task's label block only
};

// Hands out each task's training block exactly once and counts reads, so the
// replay-free contract is checkable from the outside.
class TaskDataSource {
 public:
  explicit TaskDataSource(std::vector<TaskData> blocks)
      : blocks_(std::move(blocks)), reads_(blocks_.size(), 0) {}

  std::size_t num_tasks() const { return blocks_.size(); }
  const std::vector<std::size_t>& read_counts() const { return reads_; }

  TaskData take(std::size_t task) {
    if (task >= blocks_.size())
      throw std::out_of_range("TaskDataSource: task index out of range");
    ++reads_[task];
    TaskData d = std::move(blocks_[task]);
    blocks_[task] = TaskData{};  // dropped; later reads would return nothing
    return d;
  }

 private:
  std::vector<TaskData> blocks_;
  std::vector<std::size_t> reads_;
};

struct AugmentedTask {
  Matrix features;
  Matrix labels;  // seen-so-far ∪ new labels, bipolar
};

struct SeaState {
  DosaModel model;
  MarginVector margin;
  std::vector<std::size_t> seen_label_indices;
  std::vector<TrainLog> task_logs;
  bool initialized = false;
};

// Old-label columns come from the previous model's predictions on the new
// samples; new-label columns are the ground truth.
inline AugmentedTask augment_labels(DosaModel& prev_model,
                                    const Matrix& features,
                                    const Matrix& new_labels, Rng& rng) {
  const std::size_t old_r = prev_model.num_labels();
  DualPrediction pred = prev_model.predict(features, rng);
  AugmentedTask out;
  out.features = features;
  out.labels = Matrix(features.rows, old_r + new_labels.cols);
  for (std::size_t i = 0; i < features.rows; ++i) {
    for (std::size_t j = 0; j < old_r; ++j)
      out.labels.at(i, j) = pred.labels.at(i, j);
    for (std::size_t j = 0; j < new_labels.cols; ++j)
      out.labels.at(i, old_r + j) = new_labels.at(i, j);
  }
  return out;
}

// Expands the heads for the incoming classes and extends the margin with
// entries of 1. Optimizer state is not carried over; each task trains with a
// fresh optimizer.
inline void adapt(SeaState& state, std::size_t new_label_count, Rng& rng) {
  if (new_label_count < 1)
    throw std::invalid_argument("adapt: new_label_count must be >= 1");
  state.model = state.model.expand_heads(new_label_count, rng);
  state.margin.extend(new_label_count);
}

struct SeaOptions {
  std::size_t timesteps = 10;
  TrainOptions train;  // full batch by default (batch_size = 0)
};

// Runs the whole task sequence: augment -> adapt -> train, task by task.
// Earlier tasks' samples are never touched again (the data source enforces
// and records this).
inline SeaState run_sequence(TaskDataSource& source,
                             const std::vector<TaskSpec>& train_tasks,
                             std::size_t input_dim, const LossConfig& loss_cfg,
                             const SeaOptions& opts, Rng& rng) {
  if (source.num_tasks() != train_tasks.size())
    throw std::invalid_argument("run_sequence: source/task count mismatch");
  if (auto bad = validate_tasks(train_tasks,
                                [&] {
                                  std::size_t r = 0;
                                  for (const auto& t : train_tasks)
                                    r += t.label_indices.size();
                                  return r;
                                }()))
    throw std::invalid_argument("run_sequence: invalid tasks: " + *bad);

  SeaState state;
  const bool margin_trainable =
      loss_cfg.variant == LossVariant::fmm && loss_cfg.margin_trainable;
  for (std::size_t t = 0; t < train_tasks.size(); ++t) {
    TaskData data = source.take(t);
    const std::size_t new_labels = train_tasks[t].label_indices.size();
    Matrix targets;
    if (!state.initialized) {
      DosaConfig cfg;
      cfg.input_dim = input_dim;
      cfg.num_labels = new_labels;
      cfg.timesteps = opts.timesteps;
      state.model = DosaModel::init_weights(cfg, rng);
      state.margin = MarginVector(new_labels, margin_trainable);
      state.initialized = true;
      targets = data.labels;
    } else {
      AugmentedTask aug =
          augment_labels(state.model, data.features, data.labels, rng);
      adapt(state, new_labels, rng);
      targets = aug.labels;
    }
    for (std::size_t l : train_tasks[t].label_indices)
      state.seen_label_indices.push_back(l);
    state.task_logs.push_back(train_model(state.model, state.margin,
                                          data.features, targets, loss_cfg,
                                          opts.train, rng));
    // data goes out of scope here; nothing from this task is retained
  }
  return state;
}

// Combined-mode scores: one macro F1 per task prefix, on the full test set.
inline std::vector<double> combined_scores(
    DosaModel& model, const Matrix& test_features, const Matrix& test_labels,
    const std::vector<TaskSpec>& train_tasks, Rng& rng) {
  // Model columns follow task order; remap ground truth accordingly.
  std::vector<std::size_t> col_order;
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t off = 0;
  for (const auto& t : train_tasks) {
    col_order.insert(col_order.end(), t.label_indices.begin(),
                     t.label_indices.end());
    std::vector<std::size_t> block(t.label_indices.size());
    std::iota(block.begin(), block.end(), off);
    off += t.label_indices.size();
    blocks.push_back(std::move(block));
  }
  Matrix truth = take_cols(test_labels, col_order);
  DualPrediction pred = model.predict(test_features, rng);
  std::vector<double> scores;
  for (std::size_t t = 0; t < train_tasks.size(); ++t)
    scores.push_back(combined_evaluation(truth, pred.labels, blocks, t));
  return scores;
}

}  // namespace dosa
