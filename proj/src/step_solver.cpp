#include "alice/step_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace alice {

namespace {

constexpr double kActiveTolerance = 1e-6;
constexpr double kRelativeStall = 1e-12;
constexpr int kStallWindow = 10;

bool rank_deficient(const Matrix& S) {
  if (S.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  return ev.minCoeff() <= 1e-12 * std::max(ev.maxCoeff(), 0.0);
}

double soft_term(const StepProblem& p, const Matrix& G, double eps) {
  if (p.lambda == 0.0) return 0.0;
  return p.lambda * std::sqrt((G - p.G_prev).squaredNorm() + eps);
}

double smoothed_objective(const StepProblem& p, const Matrix& G, double eps) {
  return quadratic_objective(p, G) + soft_term(p, G, eps);
}

Matrix smoothed_gradient(const StepProblem& p, const Matrix& G, double eps) {
  Matrix grad = p.eta * p.C + (p.eta + p.beta) * G * p.S;
  if (p.lambda != 0.0) {
    const Matrix diff = G - p.G_prev;
    grad += (p.lambda / std::sqrt(diff.squaredNorm() + eps)) * diff;
  }
  return grad;
}

/// Constraint that the solver will actually enforce, or nullopt when the
/// problem has none, the previous state is zero, or it is infeasible.
struct EffectiveConstraint {
  const BallConstraint* ball = nullptr;
  bool dropped = false;
};

EffectiveConstraint effective_constraint(const StepProblem& p) {
  EffectiveConstraint out;
  if (!p.constraint) return out;
  const BallConstraint& b = *p.constraint;
  if (b.x_prev.norm() == 0.0) {
    out.dropped = true;
    return out;
  }
  const Vector c_perp = b.c - p.B_projector * b.c;
  if (c_perp.norm() > b.radius) {
    out.dropped = true;
    return out;
  }
  out.ball = &b;
  return out;
}

}  // namespace

double quadratic_objective(const StepProblem& p, const Matrix& G) {
  return 0.5 * p.eta * p.q + p.eta * (G.cwiseProduct(p.C)).sum() +
         0.5 * (p.eta + p.beta) * (G.cwiseProduct(G * p.S)).sum();
}

double step_objective(const StepProblem& p, const Matrix& G) {
  return quadratic_objective(p, G) + soft_term(p, G, 0.0);
}

Matrix solve_unconstrained(const Matrix& S, const Matrix& C, double eta, double beta,
                           const Matrix& B_projector, bool* low_rank) {
  if (low_rank) *low_rank = rank_deficient(S);
  return -(eta / (eta + beta)) * B_projector * C * pseudo_inverse(S);
}

Projection project_ball_subspace(const Matrix& G, const Vector& c, const Vector& x, double r,
                                 const Matrix& B_projector) {
  const Vector v = c + G * x;
  const double v_norm = v.norm();
  if (v_norm <= r) return {G, true};

  const Vector v_par = B_projector * v;
  const Vector v_perp = v - v_par;
  const double perp2 = v_perp.squaredNorm();
  if (perp2 > r * r) return {G, false};

  const double rho = std::sqrt(r * r - perp2);
  const double par_norm = v_par.norm();
  if (par_norm == 0.0) return {G, true};
  const Vector d = (rho / par_norm - 1.0) * v_par;
  return {G + d * x.transpose() / x.squaredNorm(), true};
}

SolveReport solve_step(const StepProblem& p, const SolverOptions& options) {
  SolveReport report;
  const EffectiveConstraint ec = effective_constraint(p);
  report.constraint_dropped = ec.dropped;
  report.low_rank = rank_deficient(p.S);

  auto project = [&](const Matrix& G) -> Matrix {
    Matrix H = p.B_projector * G;
    if (!ec.ball) return H;
    return project_ball_subspace(H, ec.ball->c, ec.ball->x_prev, ec.ball->radius, p.B_projector).G;
  };

  auto finish = [&](Matrix G, bool converged, int iterations) {
    report.G_opt = std::move(G);
    report.objective = step_objective(p, report.G_opt);
    report.iterations = iterations;
    report.converged = converged;
    if (ec.ball) {
      const double slack = (ec.ball->c + report.G_opt * ec.ball->x_prev).norm() - ec.ball->radius;
      report.constraint_active = std::abs(slack) <= kActiveTolerance * (1.0 + ec.ball->radius);
    }
    report.nu_estimate = report.constraint_active ? dual_estimate(p, report.G_opt, options) : 0.0;
    return report;
  };

  if (p.lambda == 0.0 && !ec.ball) {
    return finish(solve_unconstrained(p.S, p.C, p.eta, p.beta, p.B_projector), true, 0);
  }

  const double eps = options.smoothing;
  const double grad_scale = 1.0 + (p.eta * p.C).norm() + p.lambda;

  Matrix G = project(p.G_prev);
  double f = smoothed_objective(p, G, eps);
  Matrix Y = G;
  double momentum = 1.0;
  double L = std::max((p.eta + p.beta) * spectral_norm(p.S), 1e-12);
  int stall = 0;
  bool plain_step = true;  // Y == G, no extrapolation

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    const double fY = smoothed_objective(p, Y, eps);
    const Matrix gY = smoothed_gradient(p, Y, eps);

    // Backtracking on the quadratic upper model; start optimistic.
    L = std::max(L * 0.5, 1e-12);
    Matrix Z;
    double fZ = 0.0;
    for (int bt = 0; bt < 200; ++bt) {
      Z = project(Y - gY / L);
      fZ = smoothed_objective(p, Z, eps);
      const Matrix step = Z - Y;
      const double model = fY + (gY.cwiseProduct(step)).sum() + 0.5 * L * step.squaredNorm();
      if (fZ <= model + 1e-12 * (1.0 + std::abs(fY))) break;
      L *= 2.0;
    }
    const double mapping_norm = L * (Y - Z).norm();

    if (fZ <= f) {
      const double change = f - fZ;
      const Matrix G_old = G;
      G = Z;
      f = fZ;
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      Y = G + ((momentum - 1.0) / next_momentum) * (G - G_old);
      momentum = next_momentum;
      stall = change <= kRelativeStall * (1.0 + std::abs(f)) ? stall + 1 : 0;
      if (mapping_norm <= options.tol * grad_scale || stall >= kStallWindow) {
        return finish(G, true, iter);
      }
      plain_step = false;
    } else {
      // A plain step that cannot descend means G is stationary to rounding.
      if (plain_step) return finish(G, true, iter);
      // Objective went up from the extrapolated point: restart momentum.
      momentum = 1.0;
      Y = G;
      plain_step = true;
    }
  }
  return finish(G, false, options.max_iters);
}

double dual_estimate(const StepProblem& p, const Matrix& G_opt, const SolverOptions& options) {
  const EffectiveConstraint ec = effective_constraint(p);
  if (!ec.ball) return 0.0;
  const Vector v = ec.ball->c + G_opt * ec.ball->x_prev;
  const double v_norm = v.norm();
  if (v_norm == 0.0 || std::abs(v_norm - ec.ball->radius) > kActiveTolerance * (1.0 + ec.ball->radius)) {
    return 0.0;
  }
  const Matrix g = p.B_projector * smoothed_gradient(p, G_opt, options.smoothing);
  const Matrix h = p.B_projector * (v / v_norm) * ec.ball->x_prev.transpose();
  const double hh = h.squaredNorm();
  if (hh == 0.0) return 0.0;
  return std::max(0.0, -(g.cwiseProduct(h)).sum() / hh);
}

}  // namespace alice
