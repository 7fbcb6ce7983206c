#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "alice/controller.hpp"
#include "alice/errors.hpp"
#include "alice/linalg.hpp"
#include "alice/rng.hpp"
#include "alice/step_solver.hpp"

namespace alice {

enum class Mode { warmup, active, coast };

std::string_view to_string(Mode mode);

struct AliceParams {
  double eta = 10.0;
  double beta = 1.0;
  double alpha = 0.9;
  double lambda = 0.001;
  double gamma = 1.2;
  std::int64_t t_w = 1;
  std::int64_t t_c = 1;
  std::int64_t T = 500;
  /// ||sigma||_2 of the process noise, used only for the coast band.
  double sigma_norm = 0.0;

  /// Throws ConfigError when a parameter is out of range.
  void validate() const;

  double coast_threshold() const { return 3.0 * gamma * sigma_norm; }
};

/// Decision variable G = B K, with K recovered as the minimal-norm solution.
struct GainMatrix {
  Matrix G;
  Matrix K;

  static GainMatrix zero(Eigen::Index n, Eigen::Index m);
  /// K = (B^T B)^+ B^T G, given `recovery` = (B^T B)^+ B^T.
  static GainMatrix from_product(Matrix G, const Matrix& recovery);
};

/// One observed transition and its fantasy offset c = x_new - B u_prev.
struct Transition {
  Vector x_prev;
  Vector u_prev;
  Vector x_new;
  Vector c;
};

/// Running Gram statistics of the cumulative fantasy objective:
/// S = sum x_{i-1} x_{i-1}^T, C = sum c_i x_{i-1}^T, q = sum ||c_i||^2.
class FantasyHistory {
 public:
  explicit FantasyHistory(Eigen::Index n);

  void accumulate(const Vector& x_prev, const Vector& u_prev, const Vector& x_new, const Matrix& B);

  const Matrix& S() const { return S_; }
  const Matrix& C() const { return C_; }
  double q() const { return q_; }
  std::int64_t t() const { return t_; }
  const std::optional<Transition>& last() const { return last_; }

 private:
  Matrix S_;
  Matrix C_;
  double q_ = 0.0;
  std::int64_t t_ = 0;
  std::optional<Transition> last_;
};

/// x_hat_i = (x_i - B u_prev) + G x_prev.
Vector fantasy_state(const Vector& x_i, const Vector& u_prev, const Vector& x_prev, const Matrix& B,
                     const Matrix& G);

/// J_{1:t}(G) = eta/2 q + eta tr(G^T C) + (eta+beta)/2 tr(G^T G S).
double objective_value(const FantasyHistory& history, const Matrix& G, double eta, double beta);

/// eta C + (eta+beta) G S.
Matrix objective_gradient(const FantasyHistory& history, const Matrix& G, double eta, double beta);

/// Everything Alice decided at one step, for logging and diagnostics.
struct Decision {
  std::int64_t t = 0;
  Mode mode = Mode::warmup;
  Vector u;
  /// Gain in force after this decision (unchanged when not active).
  GainMatrix gain;
  double gain_drift = 0.0;
  std::optional<SolveReport> solve;
  /// Radius of the hard constraint used, when one was posed.
  std::optional<double> constraint_radius;
  /// Solver failed and the previous gain was reused.
  bool fallback = false;
};

class AliceController final : public Controller {
 public:
  AliceController(Matrix B, AliceParams params, std::uint64_t seed, SolverOptions solver = {});

  std::string_view name() const override { return "alice"; }
  Vector act(const Vector& x) override;
  void observe(const Vector& x_prev, const Vector& u, const Vector& x_next) override;

  const AliceParams& params() const { return params_; }
  const Matrix& B() const { return B_; }
  const FantasyHistory& history() const { return history_; }
  const GainMatrix& gain() const { return gain_; }
  const Decision& last_decision() const { return decision_; }

 private:
  StepProblem build_problem() const;

  Matrix B_;
  Matrix projector_;
  Matrix recovery_;
  AliceParams params_;
  SolverOptions solver_;
  CounterRng warmup_stream_;
  FantasyHistory history_;
  GainMatrix gain_;
  Decision decision_;
};

}  // namespace alice
