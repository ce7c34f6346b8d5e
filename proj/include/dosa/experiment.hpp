// Config-driven experiment runner: dataset preparation, MLL and CMLL runs,
// the two ablations, and deterministic result files.
#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dosa/dataset.hpp"
#include "dosa/losses.hpp"
#include "dosa/metrics.hpp"
#include "dosa/model.hpp"
#include "dosa/sea.hpp"
#include "dosa/stats.hpp"
#include "dosa/synth.hpp"
#include "dosa/trainer.hpp"

namespace dosa {

inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr const char* kDataRootEnv = "DOSA_DATA_ROOT";

struct DatasetConfig {
  std::string name;
  std::string path;              // relative paths resolve under DOSA_DATA_ROOT
  std::string format = "arff";   // arff | csv | synthetic
  std::size_t label_count = 0;   // labels are the trailing/leading q columns
  NominalMode nominal_mode = NominalMode::integer;
  LabelPosition label_position = LabelPosition::trailing;
};

struct TaskConfig {
  std::vector<std::size_t> samples_per_task;
  std::vector<std::size_t> labels_per_task;
  bool shuffle_labels = false;

  bool empty() const { return samples_per_task.empty(); }
};

struct ExperimentConfig {
  DatasetConfig dataset;
  std::string mode = "mll";  // mll | cmll
  std::vector<std::size_t> hidden_layers;
  LossConfig loss = LossConfig::fmm_default();
  std::size_t epochs = 100;
  double learning_rate = 0.001;
  std::size_t timesteps = 10;
  std::size_t batch_size = 32;  // MLL; CMLL always trains full batch per task
  double test_fraction = 0.3;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  TaskConfig tasks;
  std::string output_dir = "results";

  std::string loss_name() const {
    return loss.variant == LossVariant::mm ? "mm" : "fmm";
  }

  nlohmann::json to_json() const {
    return {
        {"dataset",
         {{"name", dataset.name},
          {"path", dataset.path},
          {"format", dataset.format},
          {"label_count", dataset.label_count},
          {"nominal_mode",
           dataset.nominal_mode == NominalMode::one_hot ? "one_hot"
                                                        : "integer"},
          {"label_position",
           dataset.label_position == LabelPosition::trailing ? "trailing"
                                                             : "leading"}}},
        {"mode", mode},
        {"hidden_layers", hidden_layers},
        {"loss",
         {{"variant", loss_name()},
          {"importance_clamp_floor", loss.importance_clamp_floor},
          {"grad_through_importance", loss.grad_through_importance},
          {"margin_trainable", loss.margin_trainable},
          {"mm_per_class", loss.mm_per_class}}},
        {"epochs", epochs},
        {"learning_rate", learning_rate},
        {"timesteps", timesteps},
        {"batch_size", batch_size},
        {"test_fraction", test_fraction},
        {"seeds", seeds},
        {"tasks",
         {{"samples_per_task", tasks.samples_per_task},
          {"labels_per_task", tasks.labels_per_task},
          {"shuffle_labels", tasks.shuffle_labels}}},
        {"output_dir", output_dir}};
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    const auto& d = j.at("dataset");
    c.dataset.name = d.at("name").get<std::string>();
    c.dataset.path = d.value("path", "");
    c.dataset.format = d.value("format", "arff");
    c.dataset.label_count = d.value("label_count", std::size_t{0});
    c.dataset.nominal_mode = d.value("nominal_mode", "integer") == "one_hot"
                                 ? NominalMode::one_hot
                                 : NominalMode::integer;
    c.dataset.label_position = d.value("label_position", "trailing") ==
                                       "leading"
                                   ? LabelPosition::leading
                                   : LabelPosition::trailing;
    c.mode = j.value("mode", "mll");
    c.hidden_layers =
        j.value("hidden_layers", std::vector<std::size_t>{});
    if (j.contains("loss")) {
      const auto& l = j.at("loss");
      const std::string v = l.value("variant", "fmm");
      c.loss = v == "mm" ? LossConfig::mm_default() : LossConfig::fmm_default();
      c.loss.importance_clamp_floor =
          l.value("importance_clamp_floor", c.loss.importance_clamp_floor);
      c.loss.grad_through_importance =
          l.value("grad_through_importance", c.loss.grad_through_importance);
      c.loss.margin_trainable =
          l.value("margin_trainable", c.loss.margin_trainable);
      c.loss.mm_per_class = l.value("mm_per_class", c.loss.mm_per_class);
    }
    c.epochs = j.value("epochs", std::size_t{100});
    c.learning_rate = j.value("learning_rate", 0.001);
    c.timesteps = j.value("timesteps", std::size_t{10});
    c.batch_size = j.value("batch_size", std::size_t{32});
    c.test_fraction = j.value("test_fraction", 0.3);
    c.seeds = j.value("seeds", std::vector<std::uint64_t>{0, 1, 2, 3, 4});
    if (j.contains("tasks")) {
      const auto& t = j.at("tasks");
      c.tasks.samples_per_task =
          t.value("samples_per_task", std::vector<std::size_t>{});
      c.tasks.labels_per_task =
          t.value("labels_per_task", std::vector<std::size_t>{});
      c.tasks.shuffle_labels = t.value("shuffle_labels", false);
    }
    c.output_dir = j.value("output_dir", "results");
    return c;
  }

  static ExperimentConfig from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }

  // FNV-1a over the canonical (key-sorted) serialization.
  std::string hash() const {
    const std::string s = to_json().dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
  }
};

inline MultiLabelDataset load_dataset(const DatasetConfig& cfg) {
  if (cfg.format == "synthetic") return make_synthetic(synth_preset(cfg.name));
  std::filesystem::path p = cfg.path;
  if (p.is_relative()) {
    if (const char* root = std::getenv(kDataRootEnv)) p = std::filesystem::path(root) / p;
  }
  DatasetDescriptor desc{cfg.name, cfg.label_count, cfg.label_position};
  if (cfg.format == "arff")
    return load_arff(p.string(), desc, cfg.nominal_mode);
  if (cfg.format == "csv") return load_csv(p.string(), desc);
  throw std::invalid_argument("load_dataset: unknown format '" + cfg.format +
                              "'");
}

struct PreparedData {
  MultiLabelDataset ds;
  TrainTestSplit split;
  Matrix scaled;  // all rows, imputed + min-max scaled on the train split
};

inline PreparedData prepare_data(const ExperimentConfig& cfg,
                                 std::uint64_t seed) {
  PreparedData p;
  p.ds = load_dataset(cfg.dataset);
  if (p.ds.num_labels() == 0)
    throw std::invalid_argument("prepare_data: dataset has no labels");
  Rng rng(seed ^ 0x5a17ULL);
  p.split = stratified_split(p.ds, cfg.test_fraction, rng);
  auto means = column_means_ignoring_nan(p.ds.features, p.split.train_indices);
  impute_missing(p.ds.features, means);
  FeatureScaler scaler;
  scaler.fit(p.ds.features, p.split.train_indices);
  p.scaled = scaler.transform(p.ds.features);
  return p;
}

inline void validate_config(const ExperimentConfig& cfg,
                            const MultiLabelDataset& ds) {
  if (cfg.mode != "mll" && cfg.mode != "cmll")
    throw std::invalid_argument("config: mode must be mll or cmll");
  if (ds.num_labels() < 1 || ds.num_features() < 1)
    throw std::invalid_argument("config: degenerate dataset " + ds.name);
  if (cfg.mode == "cmll") {
    if (!cfg.hidden_layers.empty())
      throw std::invalid_argument(
          "config: cmll mode requires an extractor-free model");
    if (cfg.tasks.empty())
      throw std::invalid_argument("config: cmll mode requires task splits");
    std::size_t total = 0;
    for (auto l : cfg.tasks.labels_per_task) total += l;
    if (total != ds.num_labels())
      throw std::invalid_argument(
          "config: task label counts do not cover the dataset labels");
  }
}

struct RunResult {
  nlohmann::json data;        // deterministic given (config, seed)
  double wall_clock_sec = 0;  // kept out of the deterministic payload
};

inline RunResult run_mll(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  PreparedData p = prepare_data(cfg, seed);
  validate_config(cfg, p.ds);

  DosaConfig mc;
  mc.input_dim = p.ds.num_features();
  mc.hidden_layers = cfg.hidden_layers;
  mc.num_labels = p.ds.num_labels();
  mc.timesteps = cfg.timesteps;
  mc.seed = seed;
  Rng rng(seed);
  DosaModel model = DosaModel::init_weights(mc, rng);
  MarginVector margin(p.ds.num_labels(),
                      cfg.loss.variant == LossVariant::fmm &&
                          cfg.loss.margin_trainable);

  Matrix train_x = take_rows(p.scaled, p.split.train_indices);
  Matrix train_y = take_rows(p.ds.labels, p.split.train_indices);
  TrainOptions opts{cfg.epochs, cfg.learning_rate, cfg.batch_size};
  TrainLog log = train_model(model, margin, train_x, train_y, cfg.loss, opts,
                             rng);

  Matrix test_x = take_rows(p.scaled, p.split.test_indices);
  Matrix test_y = take_rows(p.ds.labels, p.split.test_indices);
  Rng eval_rng(seed ^ 0xe7a1ULL);
  DualPrediction pred = model.predict(test_x, eval_rng);
  MetricReport report = evaluate(test_y, pred.labels);

  RunResult r;
  r.data = {{"code_version", kCodeVersion},
            {"config_hash", cfg.hash()},
            {"dataset", cfg.dataset.name},
            {"mode", "mll"},
            {"loss", cfg.loss_name()},
            {"grad_through_importance", cfg.loss.grad_through_importance},
            {"hidden_layers", cfg.hidden_layers},
            {"seed", seed},
            {"epoch_loss", log.epoch_loss},
            {"epoch_loss_per_sample", log.epoch_loss_per_sample},
            {"saturated", log.saturated},
            {"metrics", report.to_json()},
            {"margins", margin.b.value.v},
            {"normalized_margins", normalized_margins(margin)}};
  r.wall_clock_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return r;
}

inline RunResult run_cmll(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  PreparedData p = prepare_data(cfg, seed);
  validate_config(cfg, p.ds);

  Rng rng(seed);
  auto train_tasks = split_train_tasks(
      p.split.train_indices, cfg.tasks.samples_per_task,
      cfg.tasks.labels_per_task, p.ds.num_labels(), rng,
      cfg.tasks.shuffle_labels);
  if (auto bad = validate_tasks(train_tasks, p.ds.num_labels()))
    throw std::invalid_argument("run_cmll: " + *bad);

  std::vector<TaskData> blocks;
  for (const auto& t : train_tasks)
    blocks.push_back(
        TaskData{take_rows(p.scaled, t.sample_indices),
                 take_cols(take_rows(p.ds.labels, t.sample_indices),
                           t.label_indices)});
  TaskDataSource source(std::move(blocks));

  SeaOptions opts;
  opts.timesteps = cfg.timesteps;
  opts.train = TrainOptions{cfg.epochs, cfg.learning_rate, 0};
  SeaState state = run_sequence(source, train_tasks, p.ds.num_features(),
                                cfg.loss, opts, rng);

  Matrix test_x = take_rows(p.scaled, p.split.test_indices);
  Matrix test_y = take_rows(p.ds.labels, p.split.test_indices);
  Rng eval_rng(seed ^ 0xe7a1ULL);
  auto combined =
      combined_scores(state.model, test_x, test_y, train_tasks, eval_rng);

  nlohmann::json task_losses = nlohmann::json::array();
  bool saturated = false;
  for (const auto& l : state.task_logs) {
    task_losses.push_back(l.epoch_loss);
    saturated = saturated || l.saturated;
  }
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& t : train_tasks) manifest.push_back(t.to_json());

  RunResult r;
  r.data = {{"code_version", kCodeVersion},
            {"config_hash", cfg.hash()},
            {"dataset", cfg.dataset.name},
            {"mode", "cmll"},
            {"loss", cfg.loss_name()},
            {"seed", seed},
            {"task_epoch_loss", task_losses},
            {"saturated", saturated},
            {"combined_macro_f1", combined},
            {"task_manifest", manifest},
            {"margins", state.margin.b.value.v},
            {"normalized_margins", normalized_margins(state.margin)},
            {"read_counts", source.read_counts()}};
  r.wall_clock_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return r;
}

inline RunResult run_one(const ExperimentConfig& cfg, std::uint64_t seed) {
  return cfg.mode == "cmll" ? run_cmll(cfg, seed) : run_mll(cfg, seed);
}

inline std::filesystem::path write_run(const ExperimentConfig& cfg,
                                       const RunResult& r,
                                       std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::path dir = fs::path(cfg.output_dir) / cfg.hash();
  fs::create_directories(dir);
  {
    std::ofstream c(dir / "config.json");
    c << cfg.to_json().dump(2) << "\n";
  }
  fs::path run_path = dir / ("run_" + std::to_string(seed) + ".json");
  std::ofstream out(run_path);
  out << r.data.dump(2) << "\n";
  std::ofstream tf(dir / ("run_" + std::to_string(seed) + ".time.json"));
  tf << nlohmann::json{{"wall_clock_sec", r.wall_clock_sec}}.dump() << "\n";
  return run_path;
}

// One run per seed; results land under output_dir/<config hash>/.
inline std::vector<RunResult> run_experiment(const ExperimentConfig& cfg) {
  std::vector<RunResult> out;
  for (std::uint64_t seed : cfg.seeds) {
    RunResult r = run_one(cfg, seed);
    write_run(cfg, r, seed);
    out.push_back(std::move(r));
  }
  return out;
}

// Layer-count ablation: identical config except the extractor depth; the
// layer width is taken from the config's first hidden layer.
inline nlohmann::json ablate_layers(const ExperimentConfig& base,
                                    const std::vector<std::size_t>& counts) {
  if (counts.empty())
    throw std::invalid_argument("ablate_layers: empty layer-count list");
  if (base.mode != "mll")
    throw std::invalid_argument("ablate_layers: mll mode only");
  const std::size_t width =
      base.hidden_layers.empty() ? 20 : base.hidden_layers[0];
  nlohmann::json table = nlohmann::json::array();
  for (std::size_t n : counts) {
    ExperimentConfig cfg = base;
    cfg.hidden_layers.assign(n, width);
    std::vector<double> micro, macro, weighted, iw;
    for (std::uint64_t seed : cfg.seeds) {
      RunResult r = run_mll(cfg, seed);
      r.data["ablation"] = "layers";
      r.data["layer_count"] = n;
      write_run(cfg, r, seed);
      const auto& m = r.data.at("metrics");
      micro.push_back(m.at("micro_f1").get<double>());
      macro.push_back(m.at("macro_f1").get<double>());
      weighted.push_back(m.at("weighted_f1").get<double>());
      iw.push_back(m.at("inverse_weighted_f1").get<double>());
    }
    table.push_back({{"layers", n},
                     {"micro_f1", stats::mean(micro)},
                     {"macro_f1", stats::mean(macro)},
                     {"weighted_f1", stats::mean(weighted)},
                     {"inverse_weighted_f1", stats::mean(iw)},
                     {"seeds", cfg.seeds.size()}});
  }
  return table;
}

// Paired comparison of gradient flow through the importance factor, same
// seeds on both arms.
inline nlohmann::json ablate_gradflow(const ExperimentConfig& base) {
  if (base.loss.variant != LossVariant::fmm)
    throw std::invalid_argument("ablate_gradflow: fmm loss required");
  nlohmann::json rows = nlohmann::json::array();
  for (bool through : {true, false}) {
    ExperimentConfig cfg = base;
    cfg.loss.grad_through_importance = through;
    std::vector<double> micro, macro, weighted;
    for (std::uint64_t seed : cfg.seeds) {
      RunResult r = run_mll(cfg, seed);
      r.data["ablation"] = "gradflow";
      write_run(cfg, r, seed);
      const auto& m = r.data.at("metrics");
      micro.push_back(m.at("micro_f1").get<double>());
      macro.push_back(m.at("macro_f1").get<double>());
      weighted.push_back(m.at("weighted_f1").get<double>());
    }
    rows.push_back({{"arm", through ? "with_grad" : "without_grad"},
                    {"micro_f1_median", stats::median(micro)},
                    {"macro_f1_median", stats::median(macro)},
                    {"weighted_f1_median", stats::median(weighted)},
                    {"micro_f1_mean", stats::mean(micro)},
                    {"seeds", cfg.seeds.size()}});
  }
  return rows;
}

}  // namespace dosa
