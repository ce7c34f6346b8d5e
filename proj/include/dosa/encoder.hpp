// Poisson rate encoding: a feature value in [0,1] is the per-timestep spike
// probability.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dosa/matrix.hpp"
#include "dosa/rng.hpp"

namespace dosa {

struct EncoderConfig {
  std::size_t timesteps = 10;
  double dt_ms = 1.0;
  std::uint64_t seed = 0;
};

// Returns T spike matrices of shape n x m with entries in {0,1}.
inline std::vector<Matrix> poisson_encode(const Matrix& features,
                                          const EncoderConfig& cfg, Rng& rng) {
  if (cfg.timesteps < 1)
    throw std::invalid_argument("poisson_encode: timesteps must be >= 1");
  for (std::size_t i = 0; i < features.rows; ++i)
    for (std::size_t j = 0; j < features.cols; ++j) {
      const double f = features.at(i, j);
      if (!(f >= 0.0 && f <= 1.0))
        throw std::out_of_range("poisson_encode: feature (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ") = " + std::to_string(f) +
                                " outside [0,1]");
    }
  std::vector<Matrix> spikes;
  spikes.reserve(cfg.timesteps);
  for (std::size_t t = 0; t < cfg.timesteps; ++t) {
    Matrix s(features.rows, features.cols);
    for (std::size_t i = 0; i < s.v.size(); ++i)
      s.v[i] = rng.bernoulli(features.v[i]) ? 1.0 : 0.0;
    spikes.push_back(std::move(s));
  }
  return spikes;
}

}  // namespace dosa
