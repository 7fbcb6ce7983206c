#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include "alice/controller.hpp"
#include "alice/errors.hpp"
#include "alice/linalg.hpp"
#include "alice/rng.hpp"

namespace alice {

/// Infinite-horizon LQR solution for cost weights Q = eta I, R = beta I.
struct LqrSolution {
  Matrix P;
  Matrix K_star;
  double closed_loop_radius = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

class NotStabilizableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Value iteration on the discrete algebraic Riccati equation from P = Q
/// until ||P_{k+1} - P_k||_F <= 1e-12 ||P_k||_F. Throws NotStabilizableError
/// when the iteration cap is reached or the iterate blows up.
LqrSolution solve_dare(const Matrix& A, const Matrix& B, double eta, double beta, int max_iters = 100000);

/// Frobenius norm of the DARE residual at P.
double dare_residual(const Matrix& A, const Matrix& B, double eta, double beta, const Matrix& P);

enum class BaselineKind { lqr_oracle, zero, random };

/// u = K* x with the gain computed from the true A.
class LqrController final : public Controller {
 public:
  explicit LqrController(Matrix K_star) : K_(std::move(K_star)) {}
  std::string_view name() const override { return "lqr_oracle"; }
  Vector act(const Vector& x) override { return K_ * x; }
  const Matrix& gain() const { return K_; }

 private:
  Matrix K_;
};

class ZeroController final : public Controller {
 public:
  explicit ZeroController(Eigen::Index m) : m_(m) {}
  std::string_view name() const override { return "zero"; }
  Vector act(const Vector&) override { return Vector::Zero(m_); }

 private:
  Eigen::Index m_;
};

/// I.i.d. standard normal actions from their own substream.
class RandomController final : public Controller {
 public:
  RandomController(Eigen::Index m, std::uint64_t seed) : m_(m), rng_(seed, Stream::random_action) {}
  std::string_view name() const override { return "random"; }
  Vector act(const Vector&) override { return rng_.normal_vector(step_++, m_); }

 private:
  Eigen::Index m_;
  CounterRng rng_;
  std::uint64_t step_ = 0;
};

/// Builds a baseline; lqr_oracle requires `lqr`.
std::unique_ptr<Controller> baseline_policy(BaselineKind kind, Eigen::Index m, std::uint64_t seed,
                                            const std::optional<LqrSolution>& lqr = std::nullopt);

}  // namespace alice
