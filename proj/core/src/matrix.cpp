#include "gatedist/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace gatedist {

Matrix SvdResult::reconstruct() const {
  Matrix s = Matrix::Zero(left.cols(), right.cols());
  for (Eigen::Index i = 0; i < singulars.size(); ++i) s(i, i) = singulars(i);
  return left * s * right.adjoint();
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

SvdResult svd(const Matrix& m) {
  if (!m.allFinite()) throw domain_error("svd: input has non-finite entries");
  Eigen::JacobiSVD<Matrix> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (dec.info() != Eigen::Success)
    throw decomposition_error("svd: Jacobi iteration did not converge");
  SvdResult out;
  out.left = dec.matrixU();
  out.right = dec.matrixV();
  // pad the thin spectrum with zeros so reconstruct() works for any shape
  out.singulars = RealVector::Zero(std::min(m.rows(), m.cols()));
  out.singulars.head(dec.singularValues().size()) = dec.singularValues();
  return out;
}

double trace_norm(const Matrix& m) { return svd(m).singulars.sum(); }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return svd(m).singulars(0);
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

double unitarity_residual(const Matrix& m) {
  if (m.rows() != m.cols())
    throw dimension_error("unitarity_residual: matrix is not square");
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).norm();
}

bool is_unitary(const Matrix& m, double tol) {
  return unitarity_residual(m) <= tol;
}

std::pair<RealVector, Matrix> herm_eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw dimension_error("herm_eig: matrix is not square");
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > 1e-10 * scale)
    throw domain_error("herm_eig: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw decomposition_error("herm_eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix herm_exp(const Matrix& h, double scale) {
  auto [w, v] = herm_eig(h);
  Vector phase(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    phase(i) = std::exp(Complex(0.0, scale * w(i)));
  return v * phase.asDiagonal() * v.adjoint();
}

}  // namespace gatedist
