#include "alice/oracles.hpp"

#include <cmath>
#include <string>

namespace alice {

namespace {

// Solves (R + B^T P B) K = -B^T P A.
Matrix lqr_gain(const Matrix& A, const Matrix& B, double beta, const Matrix& P) {
  const Matrix R = beta * Matrix::Identity(B.cols(), B.cols());
  const Matrix M = R + B.transpose() * P * B;
  return -M.ldlt().solve(B.transpose() * P * A);
}

Matrix riccati_map(const Matrix& A, const Matrix& B, double eta, double beta, const Matrix& P) {
  const Matrix Q = eta * Matrix::Identity(A.rows(), A.rows());
  const Matrix K = lqr_gain(A, B, beta, P);
  // A^T P A - A^T P B (R + B^T P B)^{-1} B^T P A = A^T P A + A^T P B K
  Matrix next = Q + A.transpose() * P * A + A.transpose() * P * B * K;
  return 0.5 * (next + next.transpose());
}

}  // namespace

double dare_residual(const Matrix& A, const Matrix& B, double eta, double beta, const Matrix& P) {
  return (riccati_map(A, B, eta, beta, P) - P).norm();
}

LqrSolution solve_dare(const Matrix& A, const Matrix& B, double eta, double beta, int max_iters) {
  if (A.rows() != A.cols() || B.rows() != A.rows()) throw ConfigError("solve_dare: shape mismatch");
  Matrix P = eta * Matrix::Identity(A.rows(), A.rows());
  for (int k = 1; k <= max_iters; ++k) {
    Matrix next = riccati_map(A, B, eta, beta, P);
    if (!next.allFinite()) break;
    const double change = (next - P).stableNorm();
    const double scale = P.stableNorm();
    P = std::move(next);
    if (!std::isfinite(change) || !std::isfinite(scale)) break;
    if (change <= 1e-12 * scale) {
      LqrSolution sol;
      sol.P = P;
      sol.K_star = lqr_gain(A, B, beta, P);
      sol.closed_loop_radius = spectral_radius(A + B * sol.K_star);
      sol.residual = dare_residual(A, B, eta, beta, P);
      sol.iterations = k;
      if (!(sol.closed_loop_radius < 1.0)) break;
      return sol;
    }
  }
  throw NotStabilizableError("no stabilizing Riccati solution within " + std::to_string(max_iters) + " iterations");
}

std::unique_ptr<Controller> baseline_policy(BaselineKind kind, Eigen::Index m, std::uint64_t seed,
                                            const std::optional<LqrSolution>& lqr) {
  switch (kind) {
    case BaselineKind::lqr_oracle:
      if (!lqr) throw ConfigError("lqr_oracle baseline needs a solved LQR gain");
      return std::make_unique<LqrController>(lqr->K_star);
    case BaselineKind::zero:
      return std::make_unique<ZeroController>(m);
    case BaselineKind::random:
      return std::make_unique<RandomController>(m, seed);
  }
  throw ConfigError("unknown baseline kind");
}

}  // namespace alice
