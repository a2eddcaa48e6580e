#pragma once

#include <cstdint>
#include <numbers>
#include <random>

namespace mlk {

// Uniform draws are built directly on top of mt19937_64 instead of the
// <random> distributions, whose output is implementation-defined. This keeps
// every seeded result bit-identical across standard libraries.

/// Uniform double in the open interval (0, 1).
inline double uniform_open_unit(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform double in the open interval (-pi, pi).
inline double uniform_open_pi(std::mt19937_64& gen) {
  return (2.0 * uniform_open_unit(gen) - 1.0) * std::numbers::pi;
}

/// Bernoulli trial with success probability p.
inline bool bernoulli(std::mt19937_64& gen, double p) {
  return uniform_open_unit(gen) < p;
}

}  // namespace mlk
