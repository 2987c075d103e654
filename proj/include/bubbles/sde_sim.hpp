#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bubbles/market_data.hpp"

namespace bubbles::sim {

/// Power-law diffusion sigma(x) = sigma0 * x^theta with optional
/// deterministic drift b(x); driftless by default.
struct SimSpec {
  double sigma0 = 0.2;
  double theta = 1.0;
  double s0 = 100.0;
  std::size_t steps = 1000;  ///< number of emitted observations
  double horizon = 1.0;      ///< model time T; Euler step is T / steps
  std::uint64_t seed = 1;
  std::function<double(double)> drift;  ///< optional b(x)
};

/// mt19937_64 driven Box-Muller standard normals; bit-exact for a given
/// seed within this implementation.
std::vector<double> standard_normals(std::uint64_t seed, std::size_t count);

/// One Euler-Maruyama path from the given normal increments; emits
/// normals.size() + 1 prices at spacing dt. Paths hitting the 1e-8 floor are
/// absorbed (diffusion and drift switched off).
std::vector<double> euler_path(double sigma0, double theta, double s0,
                               double dt, std::span<const double> normals,
                               const std::function<double(double)>& drift = {});

/// Simulates spec.steps observations at spacing horizon / steps; timestamps
/// are 0, 1, 2, ... so the emitted file round-trips through parse_ticks.
market::PriceSeries simulate(const SimSpec& spec);

/// Tail power of the true sigma; the path is a bubble iff theta > 1.
double ground_truth_alpha(const SimSpec& spec);
bool ground_truth_bubble(const SimSpec& spec);

}  // namespace bubbles::sim
