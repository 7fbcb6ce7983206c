#include "alice/linalg.hpp"

#include <algorithm>

namespace alice {

Matrix pseudo_inverse(const Matrix& M, double rcond) {
  if (M.size() == 0) return Matrix::Zero(M.cols(), M.rows());
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = rcond * (s.size() > 0 ? s[0] : 0.0);
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff && s[i] > 0.0) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix column_space_projector(const Matrix& B) {
  if (B.size() == 0) return Matrix::Zero(B.rows(), B.rows());
  // Same operator as B (B^T B)^+ B^T, built from an orthonormal basis.
  Eigen::JacobiSVD<Matrix> svd(B, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  const double cutoff = 1e-12 * std::max(B.rows(), B.cols()) * s[0];
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > cutoff) ++rank;
  const Matrix U = svd.matrixU().leftCols(rank);
  Matrix P = U * U.transpose();
  return 0.5 * (P + P.transpose());
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()[0];
}

double spectral_radius(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix& lhs, const Matrix& rhs) {
  Matrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
    }
  }
  return out;
}

Matrix action_lift(const Vector& x, Eigen::Index m) {
  return kron(x.transpose(), Matrix::Identity(m, m));
}

bool all_finite(const Matrix& M) { return M.allFinite(); }

}  // namespace alice
