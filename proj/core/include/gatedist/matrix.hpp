#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace gatedist {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Shape or index mismatch between operands.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input violates a mathematical precondition (non-Hermitian, non-finite, ...).
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A matrix expected to be unitary is not, within tolerance.
struct not_unitary_error : std::invalid_argument {
  not_unitary_error(const std::string& what, double residual)
      : std::invalid_argument(what), residual(residual) {}
  double residual;
};

/// Underlying decomposition failed to converge.
struct decomposition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full SVD m = left * diag(singulars) * right^dag with unitary factors and
/// singulars sorted non-increasing.
struct SvdResult {
  Matrix left;
  RealVector singulars;
  Matrix right;

  Matrix reconstruct() const;
};

bool all_finite(const Matrix& m);

/// Kronecker product; block (i,j) of the result is a(i,j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

SvdResult svd(const Matrix& m);

/// Sum of singular values.
double trace_norm(const Matrix& m);

/// Largest singular value.
double spectral_norm(const Matrix& m);

double frobenius_norm(const Matrix& m);

/// ||m^dag m - I||_F, the deviation from unitarity. Throws on non-square input.
double unitarity_residual(const Matrix& m);

bool is_unitary(const Matrix& m, double tol);

/// Default tolerance for validating user-supplied unitaries of dimension n.
inline double unitary_input_tol(int n) { return 1e-8 * std::sqrt(double(n)); }

/// Eigendecomposition of a Hermitian matrix: real eigenvalues (ascending) and
/// a unitary eigenvector matrix. Input must be Hermitian within
/// 1e-10 * ||m||_F.
std::pair<RealVector, Matrix> herm_eig(const Matrix& m);

/// exp(i * scale * h) for Hermitian h, via eigendecomposition.
Matrix herm_exp(const Matrix& h, double scale);

}  // namespace gatedist
