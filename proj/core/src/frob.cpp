#include "gatedist/frob.hpp"

#include <cmath>
#include <sstream>

namespace gatedist {

Matrix contract_blocks(const Matrix& a, const Matrix& g, int n_s, int n_b,
                       Ordering ordering) {
  const Eigen::Index dim = Eigen::Index(n_s) * n_b;
  if (a.rows() != dim || a.cols() != dim)
    throw dimension_error("contract_blocks: full-space matrix has wrong size");
  if (g.rows() != n_s || g.cols() != n_s)
    throw dimension_error("contract_blocks: g must be n_s x n_s");

  Matrix out = Matrix::Zero(n_b, n_b);
  if (ordering == Ordering::SystemFirst) {
    for (int i = 0; i < n_s; ++i)
      for (int j = 0; j < n_s; ++j)
        out += std::conj(g(i, j)) *
               a.block(Eigen::Index(i) * n_b, Eigen::Index(j) * n_b, n_b, n_b);
  } else {
    for (int i = 0; i < n_b; ++i)
      for (int j = 0; j < n_b; ++j)
        out(i, j) = (g.adjoint() * a.block(Eigen::Index(i) * n_s,
                                           Eigen::Index(j) * n_s, n_s, n_s))
                        .trace();
  }
  return out;
}

GammaMatrix gamma(const BipartiteUnitary& u, const Matrix& g) {
  if (g.rows() != u.n_s || g.cols() != u.n_s) {
    std::ostringstream msg;
    msg << "gamma: g is " << g.rows() << "x" << g.cols() << " but n_s = " << u.n_s;
    throw dimension_error(msg.str());
  }
  GammaMatrix gm;
  gm.gamma = contract_blocks(u.matrix, g, u.n_s, u.n_b, u.ordering);
  gm.ordering = u.ordering;
  gm.svd = svd(gm.gamma);
  return gm;
}

FrobDistanceReport frob_distance(const GammaMatrix& gm, int n_s, int n_b) {
  FrobDistanceReport report;
  report.gamma_trace_norm = gm.svd.singulars.sum();
  report.distance =
      std::sqrt(std::max(0.0, 1.0 - report.gamma_trace_norm / (double(n_s) * n_b)));
  if (report.gamma_trace_norm == 0.0) {
    // every unitary is optimal; pick identity deterministically
    report.phi_opt = Matrix::Identity(n_b, n_b);
  } else {
    report.phi_opt = gm.svd.left * gm.svd.right.adjoint();
  }
  return report;
}

FrobDistanceReport frob_distance(const BipartiteUnitary& u, const Matrix& g) {
  return frob_distance(gamma(u, g), u.n_s, u.n_b);
}

double frob_distance_exact_tensor(const Matrix& u_s, const Matrix& g) {
  if (u_s.rows() != g.rows() || u_s.cols() != g.cols() || u_s.rows() != u_s.cols())
    throw dimension_error("frob_distance_exact_tensor: u_s and g must be square "
                          "matrices of equal dimension");
  const double overlap = std::abs((g.adjoint() * u_s).trace());
  return std::sqrt(std::max(0.0, 1.0 - overlap / double(u_s.rows())));
}

}  // namespace gatedist
