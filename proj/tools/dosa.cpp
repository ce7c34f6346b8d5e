// Command-line front end: run experiments from a JSON config, regenerate the
// bundled datasets, and build reports from accumulated results.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dosa/experiment.hpp"
#include "dosa/report.hpp"
#include "dosa/synth.hpp"

namespace {

using dosa::ExperimentConfig;

struct CommonOpts {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::string loss;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("config", o.config_path, "experiment config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seeds, "override the config's seed list");
  cmd->add_option("--out", o.out, "override the output directory");
  cmd->add_option("--loss", o.loss, "override the loss variant")
      ->check(CLI::IsMember({"mm", "fmm"}));
}

ExperimentConfig load_config(const CommonOpts& o, const std::string& mode) {
  ExperimentConfig cfg = ExperimentConfig::from_file(o.config_path);
  cfg.mode = mode;
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.loss == "mm") {
    auto keep = cfg.loss;
    cfg.loss = dosa::LossConfig::mm_default();
    cfg.loss.mm_per_class = keep.mm_per_class;
  } else if (o.loss == "fmm") {
    auto keep = cfg.loss;
    cfg.loss = dosa::LossConfig::fmm_default();
    cfg.loss.grad_through_importance = keep.grad_through_importance;
  }
  return cfg;
}

void print_runs(const ExperimentConfig& cfg,
                const std::vector<dosa::RunResult>& runs) {
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& d = runs[i].data;
    std::cout << cfg.dataset.name << " " << cfg.mode << " "
              << cfg.loss_name() << " seed=" << cfg.seeds[i];
    if (d.contains("metrics")) {
      const auto& m = d.at("metrics");
      std::printf(" micro=%.4f macro=%.4f Fw=%.4f Fiw=%.4f",
                  m.at("micro_f1").get<double>(),
                  m.at("macro_f1").get<double>(),
                  m.at("weighted_f1").get<double>(),
                  m.at("inverse_weighted_f1").get<double>());
    }
    if (d.contains("combined_macro_f1")) {
      std::cout << " combined=[";
      const auto& cs = d.at("combined_macro_f1");
      for (std::size_t t = 0; t < cs.size(); ++t)
        std::printf("%s%.4f", t ? " " : "", cs[t].get<double>());
      std::cout << "]";
    }
    std::cout << "\n";
  }
  std::cout << "results: " << cfg.output_dir << "/" << cfg.hash() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual-output spiking networks for multi-label classification"};
  app.require_subcommand(1);

  CommonOpts mll_opts, cmll_opts, layers_opts, grad_opts;

  auto* mll = app.add_subcommand("run-mll", "train and evaluate one dataset");
  add_common(mll, mll_opts);

  auto* cmll = app.add_subcommand(
      "run-cmll", "continual multi-label run over a task sequence");
  add_common(cmll, cmll_opts);

  auto* layers = app.add_subcommand("ablate-layers",
                                    "sweep the extractor depth");
  add_common(layers, layers_opts);
  std::vector<std::size_t> layer_counts = {1, 2, 3, 4, 5};
  layers->add_option("--layers", layer_counts, "layer counts to sweep")
      ->delimiter(',');

  auto* grad = app.add_subcommand(
      "ablate-gradflow",
      "compare gradient flow through the importance factor");
  add_common(grad, grad_opts);

  auto* report = app.add_subcommand("report",
                                    "summarize a results directory");
  std::string report_dir = "results";
  report->add_option("--dir", report_dir, "results directory");

  auto* gen = app.add_subcommand("gen-data",
                                 "write the bundled synthetic datasets");
  std::string gen_out = "data";
  std::vector<std::string> gen_names = {"flags",     "virus", "foodtruck",
                                        "birds",     "yeast", "scene"};
  gen->add_option("--out", gen_out, "output directory");
  gen->add_option("--names", gen_names, "dataset names")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (mll->parsed()) {
      auto cfg = load_config(mll_opts, "mll");
      print_runs(cfg, dosa::run_experiment(cfg));
    } else if (cmll->parsed()) {
      auto cfg = load_config(cmll_opts, "cmll");
      print_runs(cfg, dosa::run_experiment(cfg));
    } else if (layers->parsed()) {
      auto cfg = load_config(layers_opts, "mll");
      auto table = dosa::ablate_layers(cfg, layer_counts);
      std::cout << table.dump(2) << "\n";
    } else if (grad->parsed()) {
      auto cfg = load_config(grad_opts, "mll");
      auto rows = dosa::ablate_gradflow(cfg);
      std::cout << rows.dump(2) << "\n";
    } else if (report->parsed()) {
      dosa::write_report(report_dir);
      std::cout << "wrote " << report_dir << "/summary.csv and "
                << report_dir << "/plots/\n";
    } else if (gen->parsed()) {
      std::filesystem::create_directories(gen_out);
      for (const auto& name : gen_names) {
        auto spec = dosa::synth_preset(name);
        auto ds = dosa::make_synthetic(spec);
        auto path = std::filesystem::path(gen_out) / (name + ".arff");
        dosa::write_arff(ds, spec, path.string());
        std::cout << "wrote " << path.string() << " (" << ds.num_samples()
                  << "x" << ds.num_features() << ", " << ds.num_labels()
                  << " labels)\n";
      }
    }
  } catch (const std::exception& e) {
    nlohmann::json err = {{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
