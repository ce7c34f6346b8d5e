// Define-by-run reverse-mode tape over Matrix values.
//
// The tape is rebuilt on every forward pass; backward() walks the recorded
// nodes in reverse execution order and accumulates gradients into the
// Parameters that were registered with param().
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dosa/matrix.hpp"

namespace dosa {

// Exponent arguments are capped here before exp(); exp(‖·‖²) terms overflow
// float64 around 709, and anything past this cap is already astronomically
// large. A saturation flag records when the cap was hit.
inline constexpr double kExpArgCap = 80.0;

struct Var {
  std::size_t idx = static_cast<std::size_t>(-1);
  bool valid() const { return idx != static_cast<std::size_t>(-1); }
};

class Tape {
 public:
  const Matrix& val(Var x) const { return nodes_[x.idx].value; }
  const Matrix& grad(Var x) const { return nodes_[x.idx].grad; }
  bool saturated() const { return saturated_; }
  std::size_t size() const { return nodes_.size(); }

  Var constant(Matrix m) { return push(std::move(m), nullptr); }

  Var param(Parameter& p) {
    Var v = push(p.value, nullptr);
    nodes_[v.idx].param = &p;
    return v;
  }

  Var matmul(Var a, Var b) {
    const Matrix& A = val(a);
    const Matrix& B = val(b);
    Matrix C = mat::matmul(A, B);  // checks inner dims
    return push(std::move(C), [a, b](Tape& t, const Matrix& g) {
      t.accum(a, mat::matmul(g, mat::transpose(t.val(b))));
      t.accum(b, mat::matmul(mat::transpose(t.val(a)), g));
    });
  }

  Var add(Var a, Var b) {
    return push(mat::add(val(a), val(b)), [a, b](Tape& t, const Matrix& g) {
      t.accum(a, g);
      t.accum(b, g);
    });
  }

  Var sub(Var a, Var b) {
    return push(mat::sub(val(a), val(b)), [a, b](Tape& t, const Matrix& g) {
      t.accum(a, g);
      t.accum(b, mat::map(g, [](double x) { return -x; }));
    });
  }

  Var mul(Var a, Var b) {
    return push(mat::mul(val(a), val(b)), [a, b](Tape& t, const Matrix& g) {
      t.accum(a, mat::mul(g, t.val(b)));
      t.accum(b, mat::mul(g, t.val(a)));
    });
  }

  // a (n x c) plus a 1 x c row vector broadcast over rows.
  Var add_row(Var a, Var row) {
    return push(mat::add_row(val(a), val(row)),
                [a, row](Tape& t, const Matrix& g) {
                  t.accum(a, g);
                  Matrix gr(1, g.cols);
                  for (std::size_t i = 0; i < g.rows; ++i)
                    for (std::size_t j = 0; j < g.cols; ++j)
                      gr.at(0, j) += g.at(i, j);
                  t.accum(row, gr);
                });
  }

  Var sub_row(Var a, Var row) { return add_row(a, neg(row)); }

  // s is 1x1; broadcasts over a.
  Var scalar_mul(Var s, Var a) {
    const Matrix& S = val(s);
    if (S.rows != 1 || S.cols != 1)
      throw std::invalid_argument("scalar_mul: scalar operand must be 1x1");
    const double sv = S.v[0];
    Matrix r = mat::map(val(a), [sv](double x) { return sv * x; });
    return push(std::move(r), [s, a](Tape& t, const Matrix& g) {
      const double sv = t.val(s).v[0];
      t.accum(a, mat::map(g, [sv](double x) { return sv * x; }));
      Matrix gs(1, 1);
      gs.v[0] = mat::sum(mat::mul(g, t.val(a)));
      t.accum(s, gs);
    });
  }

  Var add_const(Var a, double c) {
    return push(mat::map(val(a), [c](double x) { return x + c; }),
                [a](Tape& t, const Matrix& g) { t.accum(a, g); });
  }

  Var mul_const(Var a, double c) {
    return push(mat::map(val(a), [c](double x) { return c * x; }),
                [a, c](Tape& t, const Matrix& g) {
                  t.accum(a, mat::map(g, [c](double x) { return c * x; }));
                });
  }

  Var neg(Var a) { return mul_const(a, -1.0); }

  Var square(Var a) {
    return push(mat::map(val(a), [](double x) { return x * x; }),
                [a](Tape& t, const Matrix& g) {
                  Matrix ga = g;
                  const Matrix& x = t.val(a);
                  for (std::size_t i = 0; i < ga.v.size(); ++i)
                    ga.v[i] *= 2.0 * x.v[i];
                  t.accum(a, ga);
                });
  }

  Var tanh_(Var a) {
    Var out = push(mat::map(val(a), [](double x) { return std::tanh(x); }),
                   nullptr);
    nodes_[out.idx].back = [a, out](Tape& t, const Matrix& g) {
      const Matrix& y = t.val(out);
      Matrix ga = g;
      for (std::size_t i = 0; i < ga.v.size(); ++i)
        ga.v[i] *= 1.0 - y.v[i] * y.v[i];
      t.accum(a, ga);
    };
    return out;
  }

  Var sigmoid_(Var a) {
    Var out = push(
        mat::map(val(a), [](double x) { return 1.0 / (1.0 + std::exp(-x)); }),
        nullptr);
    nodes_[out.idx].back = [a, out](Tape& t, const Matrix& g) {
      const Matrix& y = t.val(out);
      Matrix ga = g;
      for (std::size_t i = 0; i < ga.v.size(); ++i)
        ga.v[i] *= y.v[i] * (1.0 - y.v[i]);
      t.accum(a, ga);
    };
    return out;
  }

  // exp with the argument capped at kExpArgCap; the cap region has zero
  // derivative and sets the saturation flag.
  Var exp_(Var a) {
    bool hit = false;
    Matrix r = mat::map(val(a), [&hit](double x) {
      if (x > kExpArgCap) {
        hit = true;
        x = kExpArgCap;
      }
      return std::exp(x);
    });
    if (hit) saturated_ = true;
    Var out = push(std::move(r), nullptr);
    nodes_[out.idx].back = [a, out](Tape& t, const Matrix& g) {
      const Matrix& x = t.val(a);
      const Matrix& y = t.val(out);
      Matrix ga = g;
      for (std::size_t i = 0; i < ga.v.size(); ++i)
        ga.v[i] *= (x.v[i] > kExpArgCap) ? 0.0 : y.v[i];
      t.accum(a, ga);
    };
    return out;
  }

  // max(x, c); zero gradient where x < c.
  Var clamp_min(Var a, double c) {
    return push(mat::map(val(a), [c](double x) { return x < c ? c : x; }),
                [a, c](Tape& t, const Matrix& g) {
                  const Matrix& x = t.val(a);
                  Matrix ga = g;
                  for (std::size_t i = 0; i < ga.v.size(); ++i)
                    if (x.v[i] < c) ga.v[i] = 0.0;
                  t.accum(a, ga);
                });
  }

  // Spike threshold. Forward is Heaviside(x) (or the smooth surrogate itself
  // when smooth_forward is set, used by gradient checks); backward always
  // uses the arctangent-family surrogate derivative
  //   s'(x) = (alpha/2) / (1 + (pi*alpha*x/2)^2).
  Var heaviside(Var a, double alpha, bool smooth_forward = false) {
    Matrix r = smooth_forward
                   ? mat::map(val(a), [alpha](double x) {
                       return 0.5 + std::atan(std::numbers::pi * alpha * x /
                                              2.0) / std::numbers::pi;
                     })
                   : mat::map(val(a),
                              [](double x) { return x >= 0.0 ? 1.0 : 0.0; });
    return push(std::move(r), [a, alpha](Tape& t, const Matrix& g) {
      const Matrix& x = t.val(a);
      Matrix ga = g;
      for (std::size_t i = 0; i < ga.v.size(); ++i) {
        const double u = std::numbers::pi * alpha * x.v[i] / 2.0;
        ga.v[i] *= (alpha / 2.0) / (1.0 + u * u);
      }
      t.accum(a, ga);
    });
  }

  // Identity forward, zero backward.
  Var stop_gradient(Var a) { return push(val(a), nullptr); }

  // n x c -> n x 1 row sums.
  Var row_sum(Var a) {
    const Matrix& x = val(a);
    Matrix r(x.rows, 1);
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t j = 0; j < x.cols; ++j) r.at(i, 0) += x.at(i, j);
    return push(std::move(r), [a](Tape& t, const Matrix& g) {
      const Matrix& x = t.val(a);
      Matrix ga(x.rows, x.cols);
      for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) ga.at(i, j) = g.at(i, 0);
      t.accum(a, ga);
    });
  }

  Var sum(Var a) {
    Matrix r(1, 1);
    r.v[0] = mat::sum(val(a));
    return push(std::move(r), [a](Tape& t, const Matrix& g) {
      const Matrix& x = t.val(a);
      t.accum(a, Matrix(x.rows, x.cols, g.v[0]));
    });
  }

  // Accumulates d(output)/d(param) into every trainable Parameter seen on
  // this tape. output must be 1x1.
  void backward(Var output) {
    const Matrix& o = val(output);
    if (o.rows != 1 || o.cols != 1)
      throw std::invalid_argument("backward: output must be scalar (1x1), got " +
                                  o.shape_str());
    for (auto& n : nodes_) n.grad = Matrix(n.value.rows, n.value.cols);
    nodes_[output.idx].grad.v[0] = 1.0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      Node& n = nodes_[i];
      if (n.back) n.back(*this, n.grad);
      if (n.param && n.param->trainable) {
        for (std::size_t k = 0; k < n.grad.v.size(); ++k)
          n.param->grad.v[k] += n.grad.v[k];
      }
    }
  }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void(Tape&, const Matrix&)> back;  // null for leaves/stops
    Parameter* param = nullptr;
  };

  Var push(Matrix value, std::function<void(Tape&, const Matrix&)> back) {
    nodes_.push_back(Node{std::move(value), Matrix{}, std::move(back), nullptr});
    return Var{nodes_.size() - 1};
  }

  void accum(Var x, const Matrix& g) {
    Matrix& dst = nodes_[x.idx].grad;
    mat::require_same_shape(dst, g, "grad accum");
    for (std::size_t i = 0; i < dst.v.size(); ++i) dst.v[i] += g.v[i];
  }

  std::vector<Node> nodes_;
  bool saturated_ = false;
};

}  // namespace dosa
