#pragma once

#include <Eigen/Dense>

namespace alice {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Moore-Penrose pseudo-inverse through an SVD. Singular values below
/// `rcond * sigma_max` are treated as zero.
Matrix pseudo_inverse(const Matrix& M, double rcond = 1e-12);

/// Orthogonal projector onto the column space of B: B (B^T B)^+ B^T.
Matrix column_space_projector(const Matrix& B);

/// Spectral norm (largest singular value).
double spectral_norm(const Matrix& M);

/// Spectral radius (largest eigenvalue modulus) of a square matrix.
double spectral_radius(const Matrix& M);

Matrix kron(const Matrix& lhs, const Matrix& rhs);

/// Phi = x^T (x) I_m, so that K x = Phi vec(K) with column-major vec.
Matrix action_lift(const Vector& x, Eigen::Index m);

bool all_finite(const Matrix& M);

}  // namespace alice
