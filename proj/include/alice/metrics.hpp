#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alice/alice_core.hpp"
#include "alice/linalg.hpp"

namespace alice {

/// One row of a rollout log. Row t carries x_t and f_t, plus the decision
/// that produced u_{t-1}.
struct RolloutRecord {
  std::int64_t t = 0;
  std::uint64_t seed = 0;
  std::string controller;
  double x_norm2 = 0.0;
  double x_norm_inf = 0.0;
  double loss = 0.0;
  double cum_loss = 0.0;
  /// Absent past the step where the reference rollout diverged.
  std::optional<double> regret;
  double gain_drift = 0.0;
  std::optional<double> zeta;
  bool constraint_active = false;
  Mode mode = Mode::active;
  bool converged = true;
};

/// f_t = eta/2 ||x_t||^2 + beta/2 ||u_{t-1}||^2.
double step_loss(const Vector& x_t, const Vector& u_prev, double eta, double beta);

/// Reg_t = sum_{i<=t} (alice_i - oracle_i). Throws std::invalid_argument on
/// a length mismatch.
std::vector<double> regret_curve(std::span<const double> alice_losses, std::span<const double> oracle_losses);

/// Inputs of the gain-drift bound at step t >= 2.
struct ZetaInputs {
  /// sum_{i=1..t} x_{i-1} x_{i-1}^T
  Matrix S;
  Matrix B;
  double eta = 1.0;
  double beta = 1.0;
  /// Multipliers of the squared-norm constraint at steps t-1 and t.
  double nu_t = 0.0;
  double nu_t1 = 0.0;
  Vector x_t;
  Vector x_prev;        // x_{t-1}
  Vector x_prev2;       // x_{t-2}
  Vector u_prev;        // u_{t-1}
  Vector u_hat_prev2;   // fantasy action K_t x_{t-2}
};

/// zeta_t = 2 ||B|| ||numerator|| / ||hessian||, with Phi_i = x_i^T (x) I_m
/// materialized. Returns nullopt when the Hessian vanishes.
std::optional<double> zeta_bound(const ZetaInputs& in);

struct ContractionCount {
  std::size_t held = 0;
  std::size_t counted = 0;
};

/// Tally behind contraction_frequency, for pooling across rollouts.
ContractionCount contraction_count(std::span<const RolloutRecord> rollout, double alpha);

/// Fraction of rows with mode == active and a zeta value for which
/// ||x_{t+1}|| <= (alpha + zeta_t) ||x_t||, reading consecutive rows of one
/// rollout. Returns nullopt when no row qualifies.
std::optional<double> contraction_frequency(std::span<const RolloutRecord> rollout, double alpha);

/// Linear-interpolation quantile (type 7) of unsorted data; p in [0, 1].
double quantile(std::vector<double> values, double p);

/// Least-squares slope and r^2 of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace alice
