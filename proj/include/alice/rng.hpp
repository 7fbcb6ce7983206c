#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

namespace alice {

/// Substream identifiers. Every random quantity in a rollout is addressed by
/// (seed, stream, step, index), so consumers never share generator state.
enum class Stream : std::uint64_t {
  initial_state = 1,
  process_noise = 2,
  warmup_action = 3,
  random_action = 4,
  test = 99,
};

/// Counter-based generator: a stateless hash of the key, in the spirit of
/// Random123. Two draws with equal keys are bitwise identical.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, Stream stream)
      : key_(mix(seed ^ mix(static_cast<std::uint64_t>(stream) + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t step, std::uint64_t index) const {
    return mix(key_ ^ mix(step * 0x9e3779b97f4a7c15ULL + mix(index + 0x3c6ef372fe94f82bULL)));
  }

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t step, std::uint64_t index) const {
    return (static_cast<double>(bits(step, index) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on the (2*index, 2*index+1) uniform pair.
  double normal(std::uint64_t step, std::uint64_t index) const {
    const double u1 = uniform(step, 2 * index);
    const double u2 = uniform(step, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Eigen::VectorXd normal_vector(std::uint64_t step, Eigen::Index size) const {
    Eigen::VectorXd z(size);
    for (Eigen::Index i = 0; i < size; ++i) z[i] = normal(step, static_cast<std::uint64_t>(i));
    return z;
  }

 private:
  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace alice
