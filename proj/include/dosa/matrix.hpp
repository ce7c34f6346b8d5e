// Dense row-major matrix with shape-checked value-level kernels.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dosa {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), v(r * c, fill) {}
  Matrix(std::size_t r, std::size_t c, std::vector<double> data)
      : rows(r), cols(c), v(std::move(data)) {
    if (v.size() != rows * cols)
      throw std::invalid_argument("Matrix: data size does not match shape");
  }

  double& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  std::size_t size() const { return v.size(); }
  bool same_shape(const Matrix& o) const {
    return rows == o.rows && cols == o.cols;
  }
  std::string shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
  }
};

namespace mat {

inline void require_same_shape(const Matrix& a, const Matrix& b,
                               const char* op) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                a.shape_str() + " vs " + b.shape_str());
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows)
    throw std::invalid_argument("matmul: inner dimensions disagree, " +
                                a.shape_str() + " times " + b.shape_str());
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j)
        c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  return t;
}

template <class F>
inline Matrix map(const Matrix& a, F f) {
  Matrix r = a;
  for (auto& x : r.v) x = f(x);
  return r;
}

template <class F>
inline Matrix zip(const Matrix& a, const Matrix& b, F f, const char* op) {
  require_same_shape(a, b, op);
  Matrix r = a;
  for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = f(a.v[i], b.v[i]);
  return r;
}

inline Matrix add(const Matrix& a, const Matrix& b) {
  return zip(a, b, [](double x, double y) { return x + y; }, "add");
}
inline Matrix sub(const Matrix& a, const Matrix& b) {
  return zip(a, b, [](double x, double y) { return x - y; }, "sub");
}
inline Matrix mul(const Matrix& a, const Matrix& b) {
  return zip(a, b, [](double x, double y) { return x * y; }, "mul");
}

// Adds a 1xC row vector to every row of a.
inline Matrix add_row(const Matrix& a, const Matrix& row) {
  if (row.rows != 1 || row.cols != a.cols)
    throw std::invalid_argument("add_row: expected 1x" +
                                std::to_string(a.cols) + " row, got " +
                                row.shape_str());
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) r.at(i, j) += row.at(0, j);
  return r;
}

inline double sum(const Matrix& a) {
  double s = 0.0;
  for (double x : a.v) s += x;
  return s;
}

inline bool all_finite(const Matrix& a) {
  for (double x : a.v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline bool equal(const Matrix& a, const Matrix& b) {
  return a.same_shape(b) && a.v == b.v;
}

}  // namespace mat

// A value with a gradient slot; everything the optimizer touches is one of
// these.
struct Parameter {
  Matrix value;
  Matrix grad;
  bool trainable = true;

  Parameter() = default;
  explicit Parameter(Matrix m, bool train = true)
      : value(std::move(m)), grad(value.rows, value.cols), trainable(train) {}

  void zero_grad() { std::fill(grad.v.begin(), grad.v.end(), 0.0); }
};

inline void zero_grads(const std::vector<Parameter*>& params) {
  for (auto* p : params) p->zero_grad();
}

}  // namespace dosa
