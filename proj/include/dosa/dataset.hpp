// Multi-label dataset ingestion (ARFF and CSV with a JSON sidecar), min-max
// feature scaling, stratified train/test splitting, and construction of the
// disjoint task sequences used for continual learning.
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dosa/matrix.hpp"
#include "dosa/rng.hpp"

namespace dosa {

enum class NominalMode { one_hot, integer };
enum class LabelPosition { trailing, leading };

struct DatasetDescriptor {
  std::string name;
  std::size_t label_count = 0;
  LabelPosition label_position = LabelPosition::trailing;

  static DatasetDescriptor from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("descriptor: cannot open " + path);
    nlohmann::json j;
    in >> j;
    DatasetDescriptor d;
    d.name = j.at("name").get<std::string>();
    d.label_count = j.at("label_count").get<std::size_t>();
    const std::string pos = j.value("label_position", "trailing");
    if (pos == "trailing")
      d.label_position = LabelPosition::trailing;
    else if (pos == "leading")
      d.label_position = LabelPosition::leading;
    else
      throw std::runtime_error("descriptor: bad label_position '" + pos + "'");
    return d;
  }

  nlohmann::json to_json() const {
    return {{"name", name},
            {"label_count", label_count},
            {"label_position",
             label_position == LabelPosition::trailing ? "trailing"
                                                       : "leading"}};
  }
};

struct MultiLabelDataset {
  std::string name;
  Matrix features;  // n x m; may hold NaN until imputation
  Matrix labels;    // n x r, bipolar
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;

  std::size_t num_samples() const { return features.rows; }
  std::size_t num_features() const { return features.cols; }
  std::size_t num_labels() const { return labels.cols; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(c));
  return s;
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '\'' || c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline double label_to_bipolar(const std::string& tok, std::size_t line_no) {
  if (tok == "1" || tok == "+1") return 1.0;
  if (tok == "0" || tok == "-1") return -1.0;
  throw std::runtime_error("line " + std::to_string(line_no) +
                           ": label value '" + tok + "' not in {0,1,-1,+1}");
}

}  // namespace detail

// ARFF loader following MULAN conventions: the label attributes are the
// trailing (or leading) label_count attributes, with {0,1} values mapped to
// {-1,+1}. Nominal feature attributes are one-hot encoded by default; the
// integer mode keeps one column per attribute for strict dimensionality.
inline MultiLabelDataset load_arff(const std::string& path,
                                   const DatasetDescriptor& desc,
                                   NominalMode nominal_mode =
                                       NominalMode::one_hot) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_arff: cannot open " + path);

  struct Attr {
    std::string name;
    bool numeric = true;
    std::vector<std::string> values;  // nominal domain
  };
  std::vector<Attr> attrs;
  std::string relation = desc.name;
  std::string line;
  std::size_t line_no = 0;
  bool in_data = false;
  std::vector<std::vector<std::string>> rows;

  while (std::getline(in, line)) {
    ++line_no;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '%') continue;
    if (!in_data) {
      std::string lt = detail::lower(t);
      if (lt.rfind("@relation", 0) == 0) {
        relation = detail::trim(t.substr(9));
      } else if (lt.rfind("@attribute", 0) == 0) {
        std::string rest = detail::trim(t.substr(10));
        Attr a;
        if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
          const char q = rest[0];
          std::size_t end = rest.find(q, 1);
          if (end == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": unterminated attribute name");
          a.name = rest.substr(1, end - 1);
          rest = detail::trim(rest.substr(end + 1));
        } else {
          std::size_t sp = rest.find_first_of(" \t");
          if (sp == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": attribute missing type");
          a.name = rest.substr(0, sp);
          rest = detail::trim(rest.substr(sp));
        }
        std::string type = detail::lower(rest);
        if (type == "numeric" || type == "real" || type == "integer") {
          a.numeric = true;
        } else if (!rest.empty() && rest[0] == '{') {
          std::size_t close = rest.find('}');
          if (close == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": unterminated nominal domain");
          a.numeric = false;
          a.values = detail::split_csv_row(rest.substr(1, close - 1));
        } else {
          throw std::runtime_error("line " + std::to_string(line_no) +
                                   ": unsupported attribute type '" + rest +
                                   "'");
        }
        attrs.push_back(std::move(a));
      } else if (lt.rfind("@data", 0) == 0) {
        in_data = true;
      } else {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": unrecognized ARFF directive");
      }
    } else {
      auto toks = detail::split_csv_row(t);
      if (toks.size() != attrs.size())
        throw std::runtime_error("line " + std::to_string(line_no) + ": " +
                                 std::to_string(toks.size()) +
                                 " values for " +
                                 std::to_string(attrs.size()) +
                                 " attributes");
      rows.push_back(std::move(toks));
    }
  }
  if (attrs.size() < desc.label_count + 1)
    throw std::runtime_error("load_arff: fewer attributes than labels + 1");

  const std::size_t q = desc.label_count;
  const std::size_t first_label =
      desc.label_position == LabelPosition::trailing ? attrs.size() - q : 0;
  const std::size_t first_feature =
      desc.label_position == LabelPosition::trailing ? 0 : q;
  const std::size_t feat_attr_count = attrs.size() - q;

  MultiLabelDataset ds;
  ds.name = desc.name.empty() ? relation : desc.name;

  // feature column layout
  std::vector<std::size_t> col_offset(feat_attr_count);
  std::size_t m = 0;
  for (std::size_t a = 0; a < feat_attr_count; ++a) {
    const Attr& attr = attrs[first_feature + a];
    col_offset[a] = m;
    if (attr.numeric || nominal_mode == NominalMode::integer) {
      ds.feature_names.push_back(attr.name);
      m += 1;
    } else {
      for (const auto& v : attr.values)
        ds.feature_names.push_back(attr.name + "=" + v);
      m += attr.values.size();
    }
  }
  for (std::size_t k = 0; k < q; ++k)
    ds.label_names.push_back(attrs[first_label + k].name);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  ds.features = Matrix(rows.size(), m);
  ds.labels = Matrix(rows.size(), q);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t a = 0; a < feat_attr_count; ++a) {
      const Attr& attr = attrs[first_feature + a];
      const std::string& tok = rows[i][first_feature + a];
      if (attr.numeric) {
        ds.features.at(i, col_offset[a]) =
            tok == "?" ? nan : std::stod(tok);
      } else {
        std::size_t code = attr.values.size();
        if (tok != "?") {
          auto it = std::find(attr.values.begin(), attr.values.end(), tok);
          if (it == attr.values.end())
            throw std::runtime_error("row " + std::to_string(i) +
                                     ": value '" + tok +
                                     "' not in nominal domain of " +
                                     attr.name);
          code = static_cast<std::size_t>(it - attr.values.begin());
        }
        if (nominal_mode == NominalMode::integer) {
          ds.features.at(i, col_offset[a]) =
              tok == "?" ? nan : static_cast<double>(code);
        } else {
          for (std::size_t v = 0; v < attr.values.size(); ++v)
            ds.features.at(i, col_offset[a] + v) =
                tok == "?" ? nan : (v == code ? 1.0 : 0.0);
        }
      }
    }
    for (std::size_t k = 0; k < q; ++k)
      ds.labels.at(i, k) =
          detail::label_to_bipolar(rows[i][first_label + k], i + 1);
  }
  return ds;
}

// Plain CSV with a sidecar descriptor; all columns numeric, labels in
// {0,1,-1,+1} at the configured end.
inline MultiLabelDataset load_csv(const std::string& csv_path,
                                  const DatasetDescriptor& desc,
                                  bool has_header = true) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + csv_path);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    auto toks = detail::split_csv_row(t);
    if (has_header && header.empty()) {
      header = toks;
      continue;
    }
    rows.push_back(std::move(toks));
  }
  if (rows.empty()) throw std::runtime_error("load_csv: no data rows");
  const std::size_t total = rows[0].size();
  const std::size_t q = desc.label_count;
  if (total < q + 1) throw std::runtime_error("load_csv: too few columns");
  const std::size_t first_label =
      desc.label_position == LabelPosition::trailing ? total - q : 0;
  const std::size_t first_feature =
      desc.label_position == LabelPosition::trailing ? 0 : q;
  const std::size_t m = total - q;

  MultiLabelDataset ds;
  ds.name = desc.name;
  ds.features = Matrix(rows.size(), m);
  ds.labels = Matrix(rows.size(), q);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != total)
      throw std::runtime_error("load_csv: ragged row " + std::to_string(i));
    for (std::size_t j = 0; j < m; ++j) {
      const std::string& tok = rows[i][first_feature + j];
      ds.features.at(i, j) = tok == "?" ? nan : std::stod(tok);
    }
    for (std::size_t k = 0; k < q; ++k)
      ds.labels.at(i, k) =
          detail::label_to_bipolar(rows[i][first_label + k], i + 1);
  }
  for (std::size_t j = 0; j < m; ++j)
    ds.feature_names.push_back(
        header.empty() ? "f" + std::to_string(j) : header[first_feature + j]);
  for (std::size_t k = 0; k < q; ++k)
    ds.label_names.push_back(
        header.empty() ? "label" + std::to_string(k) : header[first_label + k]);
  return ds;
}

// Normalized cache: features then labels (as -1/1), full double precision so
// a round trip is bit-exact.
inline void save_csv(const MultiLabelDataset& ds, const std::string& csv_path,
                     const std::string& descriptor_path) {
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("save_csv: cannot open " + csv_path);
  for (std::size_t j = 0; j < ds.num_features(); ++j)
    out << ds.feature_names[j] << ",";
  for (std::size_t k = 0; k < ds.num_labels(); ++k)
    out << ds.label_names[k] << (k + 1 < ds.num_labels() ? "," : "\n");
  char buf[40];
  for (std::size_t i = 0; i < ds.num_samples(); ++i) {
    for (std::size_t j = 0; j < ds.num_features(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.features.at(i, j));
      out << buf << ",";
    }
    for (std::size_t k = 0; k < ds.num_labels(); ++k)
      out << static_cast<int>(ds.labels.at(i, k))
          << (k + 1 < ds.num_labels() ? "," : "\n");
  }
  DatasetDescriptor d{ds.name, ds.num_labels(), LabelPosition::trailing};
  std::ofstream dj(descriptor_path);
  if (!dj) throw std::runtime_error("save_csv: cannot open " + descriptor_path);
  dj << d.to_json().dump(2) << "\n";
}

// ---- scaling & imputation ----

struct FeatureScaler {
  std::vector<double> mins, maxs;

  // Fit on the given (train) rows only.
  void fit(const Matrix& features, const std::vector<std::size_t>& rows) {
    mins.assign(features.cols, std::numeric_limits<double>::infinity());
    maxs.assign(features.cols, -std::numeric_limits<double>::infinity());
    for (std::size_t i : rows)
      for (std::size_t j = 0; j < features.cols; ++j) {
        const double x = features.at(i, j);
        mins[j] = std::min(mins[j], x);
        maxs[j] = std::max(maxs[j], x);
      }
  }

  // (x - min) / (max - min), clipped into [0,1]; constant columns map to 0.
  Matrix transform(const Matrix& features) const {
    Matrix out = features;
    for (std::size_t i = 0; i < out.rows; ++i)
      for (std::size_t j = 0; j < out.cols; ++j) {
        const double range = maxs[j] - mins[j];
        double x = range == 0.0 ? 0.0 : (out.at(i, j) - mins[j]) / range;
        out.at(i, j) = std::clamp(x, 0.0, 1.0);
      }
    return out;
  }
};

inline std::vector<double> column_means_ignoring_nan(
    const Matrix& features, const std::vector<std::size_t>& rows) {
  std::vector<double> means(features.cols, 0.0);
  for (std::size_t j = 0; j < features.cols; ++j) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i : rows) {
      const double x = features.at(i, j);
      if (!std::isnan(x)) {
        s += x;
        ++n;
      }
    }
    means[j] = n == 0 ? 0.0 : s / static_cast<double>(n);
  }
  return means;
}

inline void impute_missing(Matrix& features, const std::vector<double>& means) {
  for (std::size_t i = 0; i < features.rows; ++i)
    for (std::size_t j = 0; j < features.cols; ++j)
      if (std::isnan(features.at(i, j))) features.at(i, j) = means[j];
}

// ---- train/test split ----

struct TrainTestSplit {
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Stratified by label cardinality (number of positive labels per sample).
inline TrainTestSplit stratified_split(const MultiLabelDataset& ds,
                                       double test_fraction, Rng& rng) {
  std::unordered_map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ds.num_samples(); ++i) {
    std::size_t card = 0;
    for (std::size_t k = 0; k < ds.num_labels(); ++k)
      if (ds.labels.at(i, k) > 0) ++card;
    groups[card].push_back(i);
  }
  std::vector<std::size_t> keys;
  for (auto& [k, v] : groups) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  TrainTestSplit s;
  for (std::size_t k : keys) {
    auto& g = groups[k];
    rng.shuffle(g.begin(), g.end());
    const std::size_t n_test =
        static_cast<std::size_t>(std::round(test_fraction * g.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
      (i < n_test ? s.test_indices : s.train_indices).push_back(g[i]);
  }
  std::sort(s.train_indices.begin(), s.train_indices.end());
  std::sort(s.test_indices.begin(), s.test_indices.end());
  return s;
}

// ---- task sequences ----

struct TaskSpec {
  std::size_t task_index = 0;
  std::vector<std::size_t> sample_indices;
  std::vector<std::size_t> label_indices;

  nlohmann::json to_json() const {
    return {{"task_index", task_index},
            {"sample_indices", sample_indices},
            {"label_indices", label_indices}};
  }
};

// Train tasks: pairwise disjoint sample blocks (seed-shuffled, contiguous)
// and disjoint label blocks assigned in column order.
inline std::vector<TaskSpec> split_train_tasks(
    const std::vector<std::size_t>& train_indices,
    const std::vector<std::size_t>& samples_per_task,
    const std::vector<std::size_t>& labels_per_task, std::size_t num_labels,
    Rng& rng, bool shuffle_labels = false) {
  const std::size_t total_samples =
      std::accumulate(samples_per_task.begin(), samples_per_task.end(),
                      std::size_t{0});
  const std::size_t total_labels = std::accumulate(
      labels_per_task.begin(), labels_per_task.end(), std::size_t{0});
  if (total_samples > train_indices.size())
    throw std::invalid_argument(
        "split_train_tasks: task sample counts sum to " +
        std::to_string(total_samples) + " but only " +
        std::to_string(train_indices.size()) + " train samples exist");
  if (total_labels != num_labels)
    throw std::invalid_argument("split_train_tasks: label counts sum to " +
                                std::to_string(total_labels) + ", expected " +
                                std::to_string(num_labels));
  std::vector<std::size_t> samples = train_indices;
  rng.shuffle(samples.begin(), samples.end());
  std::vector<std::size_t> label_order(num_labels);
  std::iota(label_order.begin(), label_order.end(), 0);
  if (shuffle_labels) rng.shuffle(label_order.begin(), label_order.end());

  std::vector<TaskSpec> tasks;
  std::size_t soff = 0, loff = 0;
  for (std::size_t t = 0; t < samples_per_task.size(); ++t) {
    TaskSpec spec;
    spec.task_index = t;
    spec.sample_indices.assign(samples.begin() + soff,
                               samples.begin() + soff + samples_per_task[t]);
    spec.label_indices.assign(label_order.begin() + loff,
                              label_order.begin() + loff + labels_per_task[t]);
    soff += samples_per_task[t];
    loff += labels_per_task[t];
    tasks.push_back(std::move(spec));
  }
  return tasks;
}

// Test tasks: every task holds all test samples; only labels are split,
// matching the train label partition.
inline std::vector<TaskSpec> split_test_tasks(
    const std::vector<std::size_t>& test_indices,
    const std::vector<TaskSpec>& train_tasks) {
  std::vector<TaskSpec> tasks;
  for (const auto& tr : train_tasks) {
    TaskSpec spec;
    spec.task_index = tr.task_index;
    spec.sample_indices = test_indices;
    spec.label_indices = tr.label_indices;
    tasks.push_back(std::move(spec));
  }
  return tasks;
}

// Returns std::nullopt when valid, otherwise the first violation found.
inline std::optional<std::string> validate_tasks(
    const std::vector<TaskSpec>& tasks, std::size_t num_labels,
    bool samples_must_be_disjoint = true) {
  std::unordered_map<std::size_t, std::size_t> label_owner;
  std::unordered_map<std::size_t, std::size_t> sample_owner;
  for (const auto& t : tasks) {
    for (std::size_t l : t.label_indices) {
      if (l >= num_labels)
        return "task " + std::to_string(t.task_index) + ": label index " +
               std::to_string(l) + " out of range";
      auto [it, inserted] = label_owner.emplace(l, t.task_index);
      if (!inserted)
        return "label " + std::to_string(l) + " shared by tasks " +
               std::to_string(it->second) + " and " +
               std::to_string(t.task_index);
    }
    if (samples_must_be_disjoint)
      for (std::size_t s : t.sample_indices) {
        auto [it, inserted] = sample_owner.emplace(s, t.task_index);
        if (!inserted)
          return "sample " + std::to_string(s) + " shared by tasks " +
                 std::to_string(it->second) + " and " +
                 std::to_string(t.task_index);
      }
  }
  for (std::size_t l = 0; l < num_labels; ++l)
    if (!label_owner.count(l))
      return "label " + std::to_string(l) + " missing from the task union";
  return std::nullopt;
}

// Row/column gather helpers used throughout the training pipelines.
inline Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), m.cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out.at(i, j) = m.at(rows[i], j);
  return out;
}

inline Matrix take_cols(const Matrix& m, const std::vector<std::size_t>& cols) {
  Matrix out(m.rows, cols.size());
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out.at(i, j) = m.at(i, cols[j]);
  return out;
}

}  // namespace dosa
