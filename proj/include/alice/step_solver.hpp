#pragma once

#include <optional>

#include "alice/linalg.hpp"

namespace alice {

/// Ball constraint ||c + G x||_2 <= radius on the fantasy current state.
struct BallConstraint {
  Vector c;
  Vector x_prev;
  double radius = 0.0;
};

/// One instance of the per-step gain problem
///
///   min_G  eta/2 q + eta tr(G^T C) + (eta+beta)/2 tr(G^T G S) + lambda ||G - G_prev||_F
///   s.t.   ||c + G x_prev||_2 <= r,  G = P_B G.
struct StepProblem {
  Matrix S;
  Matrix C;
  double q = 0.0;
  Matrix G_prev;
  std::optional<BallConstraint> constraint;
  double lambda = 0.0;
  double eta = 1.0;
  double beta = 1.0;
  Matrix B_projector;
};

struct SolveReport {
  Matrix G_opt;
  double objective = 0.0;
  int iterations = 0;
  bool constraint_active = false;
  /// Set when the hard constraint could not be met and was dropped.
  bool constraint_dropped = false;
  /// Set when S was rank deficient and a pseudo-inverse was used.
  bool low_rank = false;
  double nu_estimate = 0.0;
  bool converged = false;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iters = 5000;
  /// Smoothing of the soft term: lambda * sqrt(||G - G_prev||^2 + eps).
  double smoothing = 1e-12;
};

/// Quadratic part J(G) = eta/2 q + eta tr(G^T C) + (eta+beta)/2 tr(G^T G S).
double quadratic_objective(const StepProblem& p, const Matrix& G);

/// Exact (unsmoothed) objective including the lambda ||G - G_prev||_F term.
double step_objective(const StepProblem& p, const Matrix& G);

/// Minimizer of the quadratic part over colspace(B):
/// G = -eta/(eta+beta) P_B C S^+.
Matrix solve_unconstrained(const Matrix& S, const Matrix& C, double eta, double beta,
                           const Matrix& B_projector, bool* low_rank = nullptr);

/// Result of projecting onto {G : ||c + G x|| <= r, G = P_B G}.
struct Projection {
  Matrix G;
  bool feasible = true;  // false when ||(I - P_B) c|| > r
};

/// Frobenius-nearest point of the constraint set to G, for G already in
/// colspace(B). Requires ||x|| > 0.
Projection project_ball_subspace(const Matrix& G, const Vector& c, const Vector& x, double r,
                                 const Matrix& B_projector);

/// Accelerated projected gradient on the smoothed objective.
SolveReport solve_step(const StepProblem& p, const SolverOptions& options = {});

/// Least-squares multiplier nu >= 0 for the stationarity condition of the
/// Lagrangian with the non-squared constraint ||c + G x|| - r.
double dual_estimate(const StepProblem& p, const Matrix& G_opt, const SolverOptions& options = {});

}  // namespace alice
