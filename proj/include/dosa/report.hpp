// Aggregates run_<seed>.json files under a results directory into a
// summary.csv and a set of SVG plots.
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "dosa/stats.hpp"
#include "dosa/svg.hpp"

namespace dosa {

struct RunRecord {
  std::string dir_hash;
  std::string dataset;
  std::string mode;
  std::string loss;
  std::uint64_t seed = 0;
  nlohmann::json data;
};

inline std::vector<RunRecord> scan_results(const std::string& root) {
  namespace fs = std::filesystem;
  std::vector<RunRecord> out;
  if (!fs::exists(root)) return out;
  for (const auto& cfg_dir : fs::directory_iterator(root)) {
    if (!cfg_dir.is_directory()) continue;
    for (const auto& f : fs::directory_iterator(cfg_dir.path())) {
      const std::string name = f.path().filename().string();
      if (name.rfind("run_", 0) != 0 ||
          name.find(".time.") != std::string::npos ||
          f.path().extension() != ".json")
        continue;
      std::ifstream in(f.path());
      nlohmann::json j;
      in >> j;
      RunRecord r;
      r.dir_hash = cfg_dir.path().filename().string();
      r.dataset = j.value("dataset", "");
      r.mode = j.value("mode", "");
      r.loss = j.value("loss", "");
      r.seed = j.value("seed", std::uint64_t{0});
      r.data = std::move(j);
      out.push_back(std::move(r));
    }
  }
  // Canonical order, so the summary is invariant to scan order.
  std::sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.dataset, a.mode, a.loss, a.dir_hash, a.seed) <
           std::tie(b.dataset, b.mode, b.loss, b.dir_hash, b.seed);
  });
  return out;
}

namespace detail {

// Every scalar metric a run carries, keyed by metric name.
inline std::map<std::string, double> run_scalars(const RunRecord& r) {
  std::map<std::string, double> m;
  if (r.data.contains("metrics")) {
    const auto& me = r.data.at("metrics");
    for (const char* k : {"micro_f1", "macro_f1", "weighted_f1",
                          "weighted_f1_raw", "inverse_weighted_f1",
                          "most_imbalanced_f1"})
      if (me.contains(k)) m[k] = me.at(k).get<double>();
  }
  if (r.data.contains("combined_macro_f1")) {
    const auto& cs = r.data.at("combined_macro_f1");
    for (std::size_t t = 0; t < cs.size(); ++t)
      m["combined_macro_f1_task" + std::to_string(t + 1)] =
          cs[t].get<double>();
  }
  return m;
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace detail

// summary.csv: one row per (dataset, mode, loss, config, metric, seed) plus
// mean/std aggregate rows per group.
inline void write_summary_csv(const std::vector<RunRecord>& runs,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_summary_csv: cannot open " + path);
  out << "dataset,mode,loss,config,metric,seed,value\n";

  using Key = std::tuple<std::string, std::string, std::string, std::string,
                         std::string>;
  std::map<Key, std::vector<double>> groups;
  for (const auto& r : runs)
    for (const auto& [metric, value] : detail::run_scalars(r)) {
      out << r.dataset << "," << r.mode << "," << r.loss << "," << r.dir_hash
          << "," << metric << "," << r.seed << "," << detail::fmt(value)
          << "\n";
      groups[{r.dataset, r.mode, r.loss, r.dir_hash, metric}].push_back(value);
    }
  for (const auto& [key, values] : groups) {
    const auto& [dataset, mode, loss, hash, metric] = key;
    out << dataset << "," << mode << "," << loss << "," << hash << ","
        << metric << ",mean(n=" << values.size() << "),"
        << detail::fmt(stats::mean(values)) << "\n";
    out << dataset << "," << mode << "," << loss << "," << hash << ","
        << metric << ",std(n=" << values.size() << "),"
        << detail::fmt(stats::stddev(values)) << "\n";
  }
}

// Per-task combined macro F1 bars, one series per (dataset, loss).
inline void plot_task_bars(const std::vector<RunRecord>& runs,
                           const std::string& path) {
  std::map<std::string, std::map<std::size_t, std::vector<double>>> series_map;
  std::size_t max_tasks = 0;
  for (const auto& r : runs) {
    if (!r.data.contains("combined_macro_f1")) continue;
    const auto& cs = r.data.at("combined_macro_f1");
    max_tasks = std::max(max_tasks, cs.size());
    for (std::size_t t = 0; t < cs.size(); ++t)
      series_map[r.dataset + "/" + r.loss][t].push_back(cs[t].get<double>());
  }
  if (series_map.empty() || max_tasks == 0) return;
  std::vector<std::string> groups;
  for (std::size_t t = 0; t < max_tasks; ++t)
    groups.push_back("task " + std::to_string(t + 1));
  std::vector<svg::Series> series;
  for (const auto& [name, by_task] : series_map) {
    svg::Series s;
    s.name = name;
    for (std::size_t t = 0; t < max_tasks; ++t) {
      auto it = by_task.find(t);
      s.values.push_back(it == by_task.end() ? 0.0
                                             : stats::mean(it->second));
    }
    series.push_back(std::move(s));
  }
  svg::bar_chart(path, "Combined macro F1 per task", groups, series);
}

// Mean F1 versus extractor depth for the layer ablation runs.
inline void plot_layer_ablation(const std::vector<RunRecord>& runs,
                                const std::string& path) {
  std::map<std::string, std::map<std::size_t, std::vector<double>>> series_map;
  for (const auto& r : runs) {
    if (r.data.value("ablation", "") != "layers") continue;
    const std::size_t n = r.data.at("layer_count").get<std::size_t>();
    const auto& m = r.data.at("metrics");
    series_map[r.dataset + " micro"][n].push_back(
        m.at("micro_f1").get<double>());
    series_map[r.dataset + " macro"][n].push_back(
        m.at("macro_f1").get<double>());
  }
  if (series_map.empty()) return;
  std::vector<double> xs;
  for (const auto& [n, vs] : series_map.begin()->second)
    xs.push_back(static_cast<double>(n));
  std::vector<svg::Series> series;
  for (const auto& [name, by_n] : series_map) {
    svg::Series s;
    s.name = name;
    for (const auto& [n, vs] : by_n) s.values.push_back(stats::mean(vs));
    series.push_back(std::move(s));
  }
  svg::line_chart(path, "F1 vs extractor depth", xs, series);
}

// Learned normalized margins next to the class positive proportions, for the
// lowest-seed focal-loss MLL run of each dataset.
inline void plot_margins(const std::vector<RunRecord>& runs,
                         const std::string& path) {
  const RunRecord* pick = nullptr;
  for (const auto& r : runs) {
    if (r.mode != "mll" || r.loss != "fmm") continue;
    if (!r.data.contains("normalized_margins") || !r.data.contains("metrics"))
      continue;
    if (!pick || r.seed < pick->seed) pick = &r;
  }
  if (!pick) return;
  auto margins =
      pick->data.at("normalized_margins").get<std::vector<double>>();
  auto props = pick->data.at("metrics")
                   .at("class_proportions")
                   .get<std::vector<double>>();
  std::vector<std::string> groups;
  for (std::size_t k = 0; k < margins.size(); ++k)
    groups.push_back("c" + std::to_string(k));
  svg::bar_chart(path,
                 pick->dataset + ": normalized margin vs positive proportion",
                 groups,
                 {svg::Series{"normalized margin", margins},
                  svg::Series{"positive proportion", props}});
}

// Full report: summary.csv plus plots/ under the results root.
inline void write_report(const std::string& results_root) {
  namespace fs = std::filesystem;
  auto runs = scan_results(results_root);
  if (runs.empty())
    throw std::runtime_error("report: no runs found under " + results_root);
  write_summary_csv(runs, (fs::path(results_root) / "summary.csv").string());
  fs::path plots = fs::path(results_root) / "plots";
  fs::create_directories(plots);
  plot_task_bars(runs, (plots / "combined_f1.svg").string());
  plot_layer_ablation(runs, (plots / "layer_ablation.svg").string());
  plot_margins(runs, (plots / "margins.svg").string());
}

}  // namespace dosa
