// The dual-output spiking network: a shared PLIF feature extractor feeding
// two parallel accumulator heads. A label is positive where the positive
// head outscores the negative head.
#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dosa/encoder.hpp"
#include "dosa/losses.hpp"
#include "dosa/matrix.hpp"
#include "dosa/plif.hpp"
#include "dosa/readout.hpp"
#include "dosa/rng.hpp"
#include "dosa/tape.hpp"

namespace dosa {

struct DosaConfig {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_layers;  // empty in SEA/CMLL mode
  std::size_t num_labels = 0;
  std::size_t timesteps = 10;
  std::uint64_t seed = 0;

  void validate() const {
    if (input_dim < 1 || num_labels < 1 || timesteps < 1)
      throw std::invalid_argument("DosaConfig: dims and timesteps must be >= 1");
    for (auto h : hidden_layers)
      if (h < 1) throw std::invalid_argument("DosaConfig: hidden size 0");
  }
};

struct DualScores {
  Var y_plus;
  Var y_minus;
};

struct DualPrediction {
  Matrix y_plus;   // n x r in (-1,1)
  Matrix y_minus;  // n x r in (-1,1)
  Matrix labels;   // n x r in {-1,+1}
};

// +1 where y_plus > y_minus, -1 otherwise (ties are negative).
inline Matrix predict_labels(const Matrix& y_plus, const Matrix& y_minus) {
  mat::require_same_shape(y_plus, y_minus, "predict_labels");
  Matrix labels(y_plus.rows, y_plus.cols);
  for (std::size_t i = 0; i < labels.v.size(); ++i)
    labels.v[i] = y_plus.v[i] > y_minus.v[i] ? 1.0 : -1.0;
  return labels;
}

class DosaModel {
 public:
  DosaConfig config;
  std::vector<PlifLayer> extractor;
  AccumulatorHead positive_head;
  AccumulatorHead negative_head;

  static DosaModel init_weights(const DosaConfig& cfg, Rng& rng) {
    cfg.validate();
    DosaModel m;
    m.config = cfg;
    std::size_t fan_in = cfg.input_dim;
    for (auto width : cfg.hidden_layers) {
      m.extractor.emplace_back(fan_in, width, rng);
      fan_in = width;
    }
    m.positive_head = AccumulatorHead(fan_in, cfg.num_labels, rng);
    m.negative_head = AccumulatorHead(fan_in, cfg.num_labels, rng);
    return m;
  }

  std::size_t num_labels() const { return positive_head.num_outputs(); }

  std::vector<Parameter*> parameters() {
    std::vector<Parameter*> ps;
    for (auto& l : extractor) {
      ps.push_back(&l.weights);
      ps.push_back(&l.bias);
      ps.push_back(&l.tau_raw);
    }
    for (auto* h : {&positive_head, &negative_head}) {
      ps.push_back(&h->weights);
      ps.push_back(&h->bias);
    }
    return ps;
  }

  // Builds one full simulation on the tape: Poisson-encode, run the
  // extractor for T steps, accumulate both heads. Features must be scaled
  // to [0,1].
  DualScores forward(Tape& tape, const Matrix& features, Rng& rng,
                     bool smooth_forward = false) {
    if (features.cols != config.input_dim)
      throw std::invalid_argument("forward: feature dim " +
                                  std::to_string(features.cols) +
                                  " != input_dim " +
                                  std::to_string(config.input_dim));
    EncoderConfig enc{config.timesteps, 1.0, 0};
    auto spikes = poisson_encode(features, enc, rng);
    const std::size_t n = features.rows;
    for (auto& l : extractor) l.reset_state(tape, n);
    positive_head.reset_state(tape, n);
    negative_head.reset_state(tape, n);
    for (std::size_t t = 0; t < config.timesteps; ++t) {
      Var s = tape.constant(spikes[t]);
      for (auto& l : extractor) s = l.step(tape, s, smooth_forward);
      positive_head.step(tape, s);
      negative_head.step(tape, s);
    }
    return {positive_head.finish(tape), negative_head.finish(tape)};
  }

  DualPrediction predict(const Matrix& features, Rng& rng) {
    Tape tape;
    DualScores s = forward(tape, features, rng);
    DualPrediction p;
    p.y_plus = tape.val(s.y_plus);
    p.y_minus = tape.val(s.y_minus);
    p.labels = predict_labels(p.y_plus, p.y_minus);
    return p;
  }

  // Grows both heads from r to r + new_label_count outputs. Old columns are
  // copied bit-identically; new columns use the init_weights scheme with the
  // provided rng. The extractor is untouched.
  DosaModel expand_heads(std::size_t new_label_count, Rng& rng) const {
    DosaModel m = *this;
    if (new_label_count == 0) return m;
    const std::size_t old_r = num_labels();
    const std::size_t new_r = old_r + new_label_count;
    m.config.num_labels = new_r;
    for (auto [dst_p, src_p] : {std::pair{&m.positive_head, &positive_head},
                                std::pair{&m.negative_head, &negative_head}}) {
      AccumulatorHead& dst = *dst_p;
      const AccumulatorHead& src = *src_p;
      const std::size_t fan_in = src.fan_in();
      const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      Matrix w(fan_in, new_r);
      for (std::size_t i = 0; i < fan_in; ++i) {
        for (std::size_t j = 0; j < old_r; ++j)
          w.at(i, j) = src.weights.value.at(i, j);
        for (std::size_t j = old_r; j < new_r; ++j)
          w.at(i, j) = rng.uniform(-bound, bound);
      }
      Matrix b(1, new_r);
      for (std::size_t j = 0; j < old_r; ++j)
        b.at(0, j) = src.bias.value.at(0, j);
      dst.weights = Parameter(std::move(w));
      dst.bias = Parameter(std::move(b));
    }
    return m;
  }
};

// ---- checkpoint format (version 1) ----

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"values", m.v}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  return Matrix(j.at("rows").get<std::size_t>(),
                j.at("cols").get<std::size_t>(),
                j.at("values").get<std::vector<double>>());
}

}  // namespace detail

inline nlohmann::json checkpoint_to_json(const DosaModel& model,
                                         const MarginVector& margin) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["config"] = {{"input_dim", model.config.input_dim},
                 {"hidden_layers", model.config.hidden_layers},
                 {"num_labels", model.config.num_labels},
                 {"timesteps", model.config.timesteps},
                 {"seed", model.config.seed}};
  j["extractor"] = nlohmann::json::array();
  for (const auto& l : model.extractor)
    j["extractor"].push_back({{"weights", detail::matrix_to_json(l.weights.value)},
                              {"bias", detail::matrix_to_json(l.bias.value)},
                              {"tau_raw", l.tau_raw.value.v[0]}});
  j["positive_head"] = {
      {"weights", detail::matrix_to_json(model.positive_head.weights.value)},
      {"bias", detail::matrix_to_json(model.positive_head.bias.value)}};
  j["negative_head"] = {
      {"weights", detail::matrix_to_json(model.negative_head.weights.value)},
      {"bias", detail::matrix_to_json(model.negative_head.bias.value)}};
  j["margin"] = {{"values", margin.b.value.v},
                 {"trainable", margin.b.trainable}};
  return j;
}

inline void save_checkpoint(const std::string& path, const DosaModel& model,
                            const MarginVector& margin) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << checkpoint_to_json(model, margin).dump(2) << "\n";
}

inline std::pair<DosaModel, MarginVector> checkpoint_from_json(
    const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != 1)
    throw std::runtime_error("checkpoint: unsupported format version");
  DosaModel m;
  const auto& c = j.at("config");
  m.config.input_dim = c.at("input_dim").get<std::size_t>();
  m.config.hidden_layers = c.at("hidden_layers").get<std::vector<std::size_t>>();
  m.config.num_labels = c.at("num_labels").get<std::size_t>();
  m.config.timesteps = c.at("timesteps").get<std::size_t>();
  m.config.seed = c.at("seed").get<std::uint64_t>();
  for (const auto& lj : j.at("extractor")) {
    PlifLayer l;
    l.weights = Parameter(detail::matrix_from_json(lj.at("weights")));
    l.bias = Parameter(detail::matrix_from_json(lj.at("bias")));
    l.tau_raw = Parameter(Matrix(1, 1, lj.at("tau_raw").get<double>()));
    m.extractor.push_back(std::move(l));
  }
  m.positive_head.weights =
      Parameter(detail::matrix_from_json(j.at("positive_head").at("weights")));
  m.positive_head.bias =
      Parameter(detail::matrix_from_json(j.at("positive_head").at("bias")));
  m.negative_head.weights =
      Parameter(detail::matrix_from_json(j.at("negative_head").at("weights")));
  m.negative_head.bias =
      Parameter(detail::matrix_from_json(j.at("negative_head").at("bias")));
  MarginVector margin;
  margin.b = Parameter(
      Matrix(1, j.at("margin").at("values").get<std::vector<double>>().size(),
             0.0),
      j.at("margin").at("trainable").get<bool>());
  margin.b.value.v = j.at("margin").at("values").get<std::vector<double>>();
  return {std::move(m), std::move(margin)};
}

inline std::pair<DosaModel, MarginVector> load_checkpoint(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return checkpoint_from_json(j);
}

}  // namespace dosa
