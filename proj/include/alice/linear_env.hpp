#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alice/errors.hpp"
#include "alice/linalg.hpp"
#include "alice/rng.hpp"

namespace alice {

/// Transition-matrix schedule: piecewise constant in t, plus an optional
/// per-entry linear ramp, A_t = M_k + t * ramp for start_k <= t < start_{k+1}.
class ASchedule {
 public:
  struct Piece {
    std::int64_t start;
    Matrix matrix;
  };

  static ASchedule constant(Matrix A);
  static ASchedule piecewise(std::vector<Piece> pieces);
  static ASchedule ramp(Matrix base, Matrix slope);

  Matrix at(std::int64_t t) const;
  Eigen::Index dimension() const { return pieces_.front().matrix.rows(); }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::optional<Matrix>& slope() const { return slope_; }

 private:
  std::vector<Piece> pieces_;
  std::optional<Matrix> slope_;
};

struct PlantConfig {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  ASchedule a_schedule = ASchedule::constant(Matrix::Zero(1, 1));
  Matrix B;
  Vector sigma;
  Vector x0_mean;
  std::optional<Matrix> x0_cov;  // absent means deterministic x0

  /// Throws ConfigError on any shape or sign violation.
  void validate() const;
};

/// Guard threshold on ||x||_inf; beyond it the rollout is declared diverged.
inline constexpr double kDivergenceBound = 1e12;

/// The simulated plant. Holds the true A schedule; controllers are never
/// handed a Plant, only observations and B.
class Plant {
 public:
  Plant(PlantConfig config, std::uint64_t seed);

  /// Advances x_{t+1} = A_t x_t + B u + w_{t+1}; returns x_{t+1}.
  const Vector& step(const Vector& u);

  const Vector& observe() const { return x_; }
  std::int64_t t() const { return t_; }
  const Matrix& B() const { return config_.B; }

  /// Noise realized on the most recent step.
  const Vector& last_noise() const { return last_noise_; }
  /// Running FNV-1a digest of every noise vector drawn so far.
  std::uint64_t noise_digest() const { return noise_digest_; }

  /// Harness-side access to the plant truth.
  const PlantConfig& config() const { return config_; }

 private:
  PlantConfig config_;
  CounterRng noise_;
  std::int64_t t_ = 0;
  Vector x_;
  Vector last_noise_;
  std::uint64_t noise_digest_ = 0xcbf29ce484222325ULL;
};

/// Draws x0 = mean + L z with L L^T = cov (eigen factor, tiny negative
/// eigenvalues clamped). Throws ConfigError on a non-PSD covariance.
Vector sample_initial_state(const PlantConfig& config, std::uint64_t seed);

}  // namespace alice
