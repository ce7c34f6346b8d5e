// Deterministic synthetic multi-label generator. Each class is a sparse
// linear rule over the numeric features with its positive rate pinned by an
// empirical score quantile, so datasets are learnable and the per-class
// imbalance profile is exact.
#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dosa/dataset.hpp"
#include "dosa/matrix.hpp"
#include "dosa/rng.hpp"

namespace dosa {

struct SynthSpec {
  std::string name;
  std::size_t num_samples = 0;
  std::size_t num_features = 0;
  std::size_t num_labels = 0;
  std::uint64_t seed = 0;
  // Per-class positive proportion; filled with a decreasing spread when
  // empty.
  std::vector<double> positive_rates;
  std::size_t rule_support = 6;  // features per class rule
  // The first nominal_features columns hold categorical codes
  // 0..nominal_cardinality-1 and do not enter any class rule.
  std::size_t nominal_features = 0;
  std::size_t nominal_cardinality = 3;
  // Probability of flipping each label entry after rule assignment, matching
  // the annotation noise of field-collected benchmark data.
  double label_noise = 0.0;
  // Sample numeric features from two bands near 0 and 1 instead of U(0,1).
  // Rate-coded inputs lose mid-range resolution, so bands keep the class
  // rules detectable at small T.
  bool bimodal_features = false;
  // Fraction of nonzero entries in numeric columns no class rule touches.
  // Below 1 it mimics sparse high-dimensional data; sparsity survives
  // min-max scaling, unlike a plain amplitude damp.
  double background_density = 1.0;
};

inline MultiLabelDataset make_synthetic(SynthSpec spec) {
  if (spec.num_samples < 2 || spec.num_features < 1 || spec.num_labels < 1)
    throw std::invalid_argument("make_synthetic: degenerate spec");
  if (spec.nominal_features >= spec.num_features)
    throw std::invalid_argument("make_synthetic: no numeric features left");
  if (spec.positive_rates.empty()) {
    for (std::size_t k = 0; k < spec.num_labels; ++k) {
      const double f = spec.num_labels == 1
                           ? 0.0
                           : static_cast<double>(k) /
                                 static_cast<double>(spec.num_labels - 1);
      spec.positive_rates.push_back(0.6 - 0.55 * f);
    }
  }
  if (spec.positive_rates.size() != spec.num_labels)
    throw std::invalid_argument("make_synthetic: positive_rates length");

  Rng rng(spec.seed);
  const std::size_t n = spec.num_samples, m = spec.num_features,
                    r = spec.num_labels, nf = spec.nominal_features;
  MultiLabelDataset ds;
  ds.name = spec.name;
  ds.features = Matrix(n, m);
  ds.labels = Matrix(n, r);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nf; ++j)
      ds.features.at(i, j) = static_cast<double>(static_cast<std::size_t>(
          rng.uniform(0.0, static_cast<double>(spec.nominal_cardinality))));
    for (std::size_t j = nf; j < m; ++j)
      ds.features.at(i, j) =
          spec.bimodal_features
              ? (rng.bernoulli(0.5) ? rng.uniform(0.75, 1.0)
                                    : rng.uniform(0.0, 0.25))
              : rng.uniform(0.0, 1.0);
  }

  const std::size_t numeric = m - nf;
  const std::size_t support = std::min(spec.rule_support, numeric);
  std::vector<bool> in_rule(m, false);
  for (std::size_t k = 0; k < r; ++k) {
    std::vector<std::size_t> cols(numeric);
    std::iota(cols.begin(), cols.end(), nf);
    rng.shuffle(cols.begin(), cols.end());
    cols.resize(support);
    for (std::size_t c : cols) in_rule[c] = true;
    std::vector<double> w(support);
    for (auto& x : w) x = (rng.bernoulli(0.5) ? 1.0 : -1.0) *
                          rng.uniform(0.5, 1.5);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < support; ++c)
        s += w[c] * (ds.features.at(i, cols[c]) - 0.5);
      scores[i] = s;
    }
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n_pos = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::round(spec.positive_rates[k] * static_cast<double>(n))));
    const double threshold = sorted[n - n_pos];
    for (std::size_t i = 0; i < n; ++i)
      ds.labels.at(i, k) = scores[i] >= threshold ? 1.0 : -1.0;
  }

  // Labels never depend on non-rule columns, so sparsifying them afterwards
  // is safe.
  if (spec.background_density < 1.0)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = nf; j < m; ++j)
        if (!in_rule[j])
          ds.features.at(i, j) =
              rng.bernoulli(spec.background_density) ? ds.features.at(i, j)
                                                     : 0.0;

  if (spec.label_noise > 0.0)
    for (auto& v : ds.labels.v)
      if (rng.bernoulli(spec.label_noise)) v = -v;

  for (std::size_t j = 0; j < m; ++j)
    ds.feature_names.push_back("f" + std::to_string(j));
  for (std::size_t k = 0; k < r; ++k)
    ds.label_names.push_back("label" + std::to_string(k));
  return ds;
}

// Writes the dataset as ARFF; the first spec.nominal_features columns get a
// nominal domain {v0,...}, labels go last with {0,1} values.
inline void write_arff(const MultiLabelDataset& ds, const SynthSpec& spec,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_arff: cannot open " + path);
  out << "@relation " << ds.name << "\n\n";
  for (std::size_t j = 0; j < ds.num_features(); ++j) {
    if (j < spec.nominal_features) {
      out << "@attribute " << ds.feature_names[j] << " {";
      for (std::size_t v = 0; v < spec.nominal_cardinality; ++v)
        out << "v" << v << (v + 1 < spec.nominal_cardinality ? "," : "}\n");
    } else {
      out << "@attribute " << ds.feature_names[j] << " numeric\n";
    }
  }
  for (std::size_t k = 0; k < ds.num_labels(); ++k)
    out << "@attribute " << ds.label_names[k] << " {0,1}\n";
  out << "\n@data\n";
  char buf[40];
  for (std::size_t i = 0; i < ds.num_samples(); ++i) {
    for (std::size_t j = 0; j < ds.num_features(); ++j) {
      if (j < spec.nominal_features) {
        out << "v" << static_cast<std::size_t>(ds.features.at(i, j)) << ",";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", ds.features.at(i, j));
        out << buf << ",";
      }
    }
    for (std::size_t k = 0; k < ds.num_labels(); ++k)
      out << (ds.labels.at(i, k) > 0 ? 1 : 0)
          << (k + 1 < ds.num_labels() ? "," : "\n");
  }
}

// Shipped stand-in corpus matching the shapes and task splits the
// experiments expect. Returns the spec used for each known name.
inline SynthSpec synth_preset(const std::string& name) {
  SynthSpec s;
  s.name = name;
  s.seed = 20240915;
  s.label_noise = 0.12;
  s.bimodal_features = true;
  if (name == "flags") {
    s.num_samples = 194;
    s.num_features = 19;
    s.num_labels = 7;
    s.nominal_features = 2;
    s.rule_support = 10;
    s.label_noise = 0.05;
    s.positive_rates = {0.55, 0.45, 0.30, 0.20, 0.50, 0.09, 0.60};
  } else if (name == "virus") {
    s.num_samples = 207;
    s.num_features = 440;
    s.num_labels = 6;
    s.rule_support = 12;
    s.label_noise = 0.08;
    s.background_density = 0.10;
    s.positive_rates = {0.45, 0.30, 0.20, 0.35, 0.12, 0.25};
  } else if (name == "foodtruck") {
    s.num_samples = 407;
    s.num_features = 21;
    s.num_labels = 12;
    s.rule_support = 14;
    s.label_noise = 0.16;
    s.positive_rates = {0.55, 0.45, 0.40, 0.35, 0.30, 0.25,
                        0.20, 0.15, 0.12, 0.10, 0.07, 0.05};
  } else if (name == "birds") {
    s.num_samples = 645;
    s.num_features = 260;
    s.num_labels = 19;
    s.rule_support = 10;
  } else if (name == "yeast") {
    s.num_samples = 800;  // desk-scale stand-in
    s.num_features = 103;
    s.num_labels = 14;
    s.rule_support = 8;
  } else if (name == "scene") {
    s.num_samples = 900;  // desk-scale stand-in
    s.num_features = 294;
    s.num_labels = 6;
    s.rule_support = 10;
  } else {
    throw std::invalid_argument("synth_preset: unknown dataset '" + name +
                                "'");
  }
  return s;
}

}  // namespace dosa
