#pragma once

#include <cstdint>
#include <random>

#include "dosa/matrix.hpp"

namespace dosa {

// All stochastic choices in the library go through this wrapper so a run is
// fully determined by its seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  bool bernoulli(double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_) < p;
  }

  std::uint64_t next_u64() { return engine_(); }

  // Derives an independent stream, e.g. one per task or per epoch.
  Rng fork() { return Rng(engine_()); }

  template <class It>
  void shuffle(It first, It last) {
    std::shuffle(first, last, engine_);
  }

  Matrix uniform_matrix(std::size_t rows, std::size_t cols, double lo,
                        double hi) {
    Matrix m(rows, cols);
    for (auto& x : m.v) x = uniform(lo, hi);
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dosa
