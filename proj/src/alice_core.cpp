#include "alice/alice_core.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace alice {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::warmup: return "warmup";
    case Mode::active: return "active";
    case Mode::coast: return "coast";
  }
  return "unknown";
}

void AliceParams::validate() const {
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (!(alpha > 1.0 / gamma && alpha < 1.0)) throw ConfigError("alpha must lie in (1/gamma, 1)");
  if (t_w < 1) throw ConfigError("t_w must be at least 1");
  if (T < 1) throw ConfigError("T must be at least 1");
  if (t_c < 1 || t_c > T) throw ConfigError("t_c must lie in [1, T]");
  if (!(sigma_norm >= 0.0) || !std::isfinite(sigma_norm)) throw ConfigError("sigma_norm must be finite and >= 0");
}

GainMatrix GainMatrix::zero(Eigen::Index n, Eigen::Index m) {
  return {Matrix::Zero(n, n), Matrix::Zero(m, n)};
}

GainMatrix GainMatrix::from_product(Matrix G, const Matrix& recovery) {
  Matrix K = recovery * G;
  return {std::move(G), std::move(K)};
}

FantasyHistory::FantasyHistory(Eigen::Index n) : S_(Matrix::Zero(n, n)), C_(Matrix::Zero(n, n)) {}

void FantasyHistory::accumulate(const Vector& x_prev, const Vector& u_prev, const Vector& x_new,
                                const Matrix& B) {
  Vector c = x_new - B * u_prev;
  S_.noalias() += x_prev * x_prev.transpose();
  C_.noalias() += c * x_prev.transpose();
  q_ += c.squaredNorm();
  ++t_;
  last_ = Transition{x_prev, u_prev, x_new, std::move(c)};
}

Vector fantasy_state(const Vector& x_i, const Vector& u_prev, const Vector& x_prev, const Matrix& B,
                     const Matrix& G) {
  return (x_i - B * u_prev) + G * x_prev;
}

double objective_value(const FantasyHistory& history, const Matrix& G, double eta, double beta) {
  return 0.5 * eta * history.q() + eta * G.cwiseProduct(history.C()).sum() +
         0.5 * (eta + beta) * G.cwiseProduct(G * history.S()).sum();
}

Matrix objective_gradient(const FantasyHistory& history, const Matrix& G, double eta, double beta) {
  return eta * history.C() + (eta + beta) * G * history.S();
}

AliceController::AliceController(Matrix B, AliceParams params, std::uint64_t seed, SolverOptions solver)
    : B_(std::move(B)),
      projector_(column_space_projector(B_)),
      recovery_(pseudo_inverse(B_.transpose() * B_) * B_.transpose()),
      params_(params),
      solver_(solver),
      warmup_stream_(seed, Stream::warmup_action),
      history_(B_.rows()),
      gain_(GainMatrix::zero(B_.rows(), B_.cols())) {
  params_.validate();
  decision_.gain = gain_;
}

StepProblem AliceController::build_problem() const {
  StepProblem p;
  p.S = history_.S();
  p.C = history_.C();
  p.q = history_.q();
  p.G_prev = gain_.G;
  p.lambda = params_.lambda;
  p.eta = params_.eta;
  p.beta = params_.beta;
  p.B_projector = projector_;
  if (history_.t() >= params_.t_c && history_.last()) {
    const Transition& tr = *history_.last();
    p.constraint = BallConstraint{tr.c, tr.x_prev, params_.alpha * tr.x_prev.norm()};
  }
  return p;
}

Vector AliceController::act(const Vector& x) {
  const std::int64_t t = history_.t();
  Decision d;
  d.t = t;

  if (t < params_.t_w) {
    d.mode = Mode::warmup;
    d.u = warmup_stream_.normal_vector(static_cast<std::uint64_t>(t), B_.cols());
  } else if (x.norm() <= params_.coast_threshold()) {
    d.mode = Mode::coast;
    d.u = Vector::Zero(B_.cols());
  } else {
    d.mode = Mode::active;
    const StepProblem problem = build_problem();
    if (problem.constraint) d.constraint_radius = problem.constraint->radius;
    try {
      SolveReport report = solve_step(problem, solver_);
      if (report.G_opt.allFinite()) {
        GainMatrix next = GainMatrix::from_product(report.G_opt, recovery_);
        d.gain_drift = (next.G - gain_.G).norm();
        gain_ = std::move(next);
      } else {
        d.fallback = true;
      }
      d.solve = std::move(report);
    } catch (const std::exception&) {
      d.fallback = true;
    }
    d.u = gain_.K * x;
  }
  d.gain = gain_;
  decision_ = std::move(d);
  return decision_.u;
}

void AliceController::observe(const Vector& x_prev, const Vector& u, const Vector& x_next) {
  history_.accumulate(x_prev, u, x_next, B_);
}

}  // namespace alice
