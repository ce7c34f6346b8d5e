// Per-class F1 plus the four aggregates: micro, macro, support-weighted F_w
// and inverse-weighted F_iw. Positive class is +1.
#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dosa/losses.hpp"
#include "dosa/matrix.hpp"

namespace dosa {

struct ClassCounts {
  std::size_t num_samples = 0;
  std::vector<std::size_t> tp, fp, fn;
  std::vector<std::size_t> positives;  // per-class positive support

  std::size_t num_classes() const { return tp.size(); }
  double proportion(std::size_t k) const {
    return static_cast<double>(positives[k]) /
           static_cast<double>(num_samples);
  }
};

inline ClassCounts class_counts(const Matrix& y_true, const Matrix& y_pred) {
  mat::require_same_shape(y_true, y_pred, "class_counts");
  require_bipolar(y_true, "class_counts(y_true)");
  require_bipolar(y_pred, "class_counts(y_pred)");
  ClassCounts c;
  c.num_samples = y_true.rows;
  const std::size_t r = y_true.cols;
  c.tp.assign(r, 0);
  c.fp.assign(r, 0);
  c.fn.assign(r, 0);
  c.positives.assign(r, 0);
  for (std::size_t i = 0; i < y_true.rows; ++i)
    for (std::size_t k = 0; k < r; ++k) {
      const bool t = y_true.at(i, k) > 0;
      const bool p = y_pred.at(i, k) > 0;
      if (t) ++c.positives[k];
      if (t && p) ++c.tp[k];
      if (!t && p) ++c.fp[k];
      if (t && !p) ++c.fn[k];
    }
  return c;
}

// 2tp / (2tp + fp + fn), 0 by convention when the denominator is 0.
inline double f1_from(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t den = 2 * tp + fp + fn;
  return den == 0 ? 0.0 : 2.0 * static_cast<double>(tp) /
                              static_cast<double>(den);
}

inline std::vector<double> f1_per_class(const ClassCounts& c) {
  std::vector<double> f(c.num_classes());
  for (std::size_t k = 0; k < f.size(); ++k)
    f[k] = f1_from(c.tp[k], c.fp[k], c.fn[k]);
  return f;
}

inline double micro_f1(const ClassCounts& c) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t k = 0; k < c.num_classes(); ++k) {
    tp += c.tp[k];
    fp += c.fp[k];
    fn += c.fn[k];
  }
  return f1_from(tp, fp, fn);
}

inline double macro_f1(const ClassCounts& c) {
  auto f = f1_per_class(c);
  if (f.empty()) return 0.0;
  double s = 0.0;
  for (double x : f) s += x;
  return s / static_cast<double>(f.size());
}

// Support-weighted mean of per-class F1, normalized by the total support so
// it stays a weighted average even when proportions do not sum to 1.
// raw = sum_k n_k F_k as typeset is available via weighted_f1_raw.
inline double weighted_f1(const ClassCounts& c) {
  auto f = f1_per_class(c);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double nk = c.proportion(k);
    num += nk * f[k];
    den += nk;
  }
  return den == 0.0 ? 0.0 : num / den;
}

inline double weighted_f1_raw(const ClassCounts& c) {
  auto f = f1_per_class(c);
  double num = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) num += c.proportion(k) * f[k];
  return num;
}

// (sum_k F_k / n_k) / (sum_k 1 / n_k); classes with zero positive support
// are excluded (and reported by the caller via MetricReport).
inline double inverse_weighted_f1(const ClassCounts& c) {
  auto f = f1_per_class(c);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double nk = c.proportion(k);
    if (nk == 0.0) continue;
    num += f[k] / nk;
    den += 1.0 / nk;
  }
  return den == 0.0 ? 0.0 : num / den;
}

// argmin of positive support; ties break to the lowest class index.
inline std::size_t most_imbalanced_class(const ClassCounts& c) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < c.num_classes(); ++k)
    if (c.positives[k] < c.positives[best]) best = k;
  return best;
}

struct MetricReport {
  std::vector<double> per_class_f1;
  double micro = 0.0;
  double macro = 0.0;
  double weighted = 0.0;
  double weighted_raw = 0.0;
  double inverse_weighted = 0.0;
  std::size_t most_imbalanced = 0;
  double most_imbalanced_f1 = 0.0;
  std::vector<std::size_t> degenerate_classes;  // zero positive support
  std::vector<double> class_proportions;

  nlohmann::json to_json() const {
    return {{"per_class_f1", per_class_f1},
            {"micro_f1", micro},
            {"macro_f1", macro},
            {"weighted_f1", weighted},
            {"weighted_f1_raw", weighted_raw},
            {"inverse_weighted_f1", inverse_weighted},
            {"most_imbalanced_class", most_imbalanced},
            {"most_imbalanced_f1", most_imbalanced_f1},
            {"degenerate_classes", degenerate_classes},
            {"class_proportions", class_proportions}};
  }

  std::string per_class_csv() const {
    std::ostringstream os;
    os << "class,f1,positive_proportion\n";
    for (std::size_t k = 0; k < per_class_f1.size(); ++k)
      os << k << "," << per_class_f1[k] << "," << class_proportions[k] << "\n";
    return os.str();
  }
};

inline MetricReport evaluate(const Matrix& y_true, const Matrix& y_pred) {
  ClassCounts c = class_counts(y_true, y_pred);
  MetricReport r;
  r.per_class_f1 = f1_per_class(c);
  r.micro = micro_f1(c);
  r.macro = macro_f1(c);
  r.weighted = weighted_f1(c);
  r.weighted_raw = weighted_f1_raw(c);
  r.inverse_weighted = inverse_weighted_f1(c);
  r.most_imbalanced = most_imbalanced_class(c);
  r.most_imbalanced_f1 = r.per_class_f1[r.most_imbalanced];
  for (std::size_t k = 0; k < c.num_classes(); ++k) {
    r.class_proportions.push_back(c.proportion(k));
    if (c.positives[k] == 0) r.degenerate_classes.push_back(k);
  }
  return r;
}

// Combined evaluation for task sequences: macro F1 restricted to the union
// of the label blocks of tasks 0..up_to_task, over all test samples.
inline double combined_evaluation(
    const Matrix& y_true, const Matrix& y_pred,
    const std::vector<std::vector<std::size_t>>& label_blocks,
    std::size_t up_to_task) {
  if (up_to_task >= label_blocks.size())
    throw std::out_of_range("combined_evaluation: task index " +
                            std::to_string(up_to_task) + " out of range");
  std::vector<std::size_t> cols;
  for (std::size_t t = 0; t <= up_to_task; ++t)
    cols.insert(cols.end(), label_blocks[t].begin(), label_blocks[t].end());
  Matrix t(y_true.rows, cols.size()), p(y_pred.rows, cols.size());
  for (std::size_t i = 0; i < y_true.rows; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      t.at(i, j) = y_true.at(i, cols[j]);
      p.at(i, j) = y_pred.at(i, cols[j]);
    }
  return macro_f1(class_counts(t, p));
}

}  // namespace dosa
