#pragma once

#include <random>

namespace acopt {

// Every stochastic choice in a run flows through one of these helpers on a
// single seeded engine, so equal seeds replay the exact draw sequence.
inline double draw_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

inline double draw_uniform(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

// Uniform index in [0, n).
inline std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(rng);
}

}  // namespace acopt
