#include "bubbles/sde_sim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace bubbles::sim {

namespace {

constexpr double kFloor = 1e-8;

void validate(const SimSpec& spec) {
  if (!(spec.s0 > 0.0)) throw std::invalid_argument("simulate: s0 must be positive");
  if (!(spec.sigma0 >= 0.0)) throw std::invalid_argument("simulate: sigma0 must be >= 0");
  if (!(spec.theta >= 0.0)) throw std::invalid_argument("simulate: theta must be >= 0");
  if (spec.steps < 2) throw std::invalid_argument("simulate: steps must be >= 2");
  if (!(spec.horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be positive");
}

}  // namespace

std::vector<double> standard_normals(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 eng(seed);
  auto uniform = [&eng]() {
    // 53-bit mantissa in [0, 1); 1 - u keeps log() finite.
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
  };
  std::vector<double> out;
  out.reserve(count + 1);
  while (out.size() < count) {
    const double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    out.push_back(r * std::cos(phi));
    out.push_back(r * std::sin(phi));
  }
  out.resize(count);
  return out;
}

std::vector<double> euler_path(double sigma0, double theta, double s0,
                               double dt, std::span<const double> normals,
                               const std::function<double(double)>& drift) {
  if (!(dt > 0.0)) throw std::invalid_argument("euler_path: dt must be positive");
  const double sqdt = std::sqrt(dt);
  std::vector<double> prices;
  prices.reserve(normals.size() + 1);
  double s = s0;
  bool absorbed = s <= kFloor;
  prices.push_back(absorbed ? kFloor : s);
  for (double z : normals) {
    if (!absorbed) {
      double next = s + sigma0 * std::pow(s, theta) * sqdt * z;
      if (drift) next += drift(s) * dt;
      if (next <= kFloor) {
        next = kFloor;
        absorbed = true;
      }
      s = next;
    }
    prices.push_back(s);
  }
  return prices;
}

market::PriceSeries simulate(const SimSpec& spec) {
  validate(spec);
  const double dt = spec.horizon / static_cast<double>(spec.steps);
  const std::vector<double> normals =
      standard_normals(spec.seed, spec.steps - 1);
  std::vector<double> prices =
      euler_path(spec.sigma0, spec.theta, spec.s0, dt, normals, spec.drift);

  market::PriceSeries out;
  out.prices = std::move(prices);
  out.timestamps.resize(out.prices.size());
  for (std::size_t i = 0; i < out.timestamps.size(); ++i) {
    out.timestamps[i] = static_cast<double>(i);
  }
  out.dt = dt;
  out.time_span = dt * static_cast<double>(spec.steps - 1);
  return out;
}

double ground_truth_alpha(const SimSpec& spec) { return spec.theta; }

bool ground_truth_bubble(const SimSpec& spec) { return spec.theta > 1.0; }

}  // namespace bubbles::sim
