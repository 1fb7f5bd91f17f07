#include "gatedist/bipartite.hpp"

#include <sstream>

namespace gatedist {

std::string to_string(Ordering o) {
  return o == Ordering::SystemFirst ? "system_first" : "bath_first";
}

Ordering ordering_from_string(const std::string& s) {
  if (s == "system_first") return Ordering::SystemFirst;
  if (s == "bath_first") return Ordering::BathFirst;
  throw domain_error("unknown ordering '" + s +
                     "' (expected system_first or bath_first)");
}

BipartiteUnitary BipartiteUnitary::checked(Matrix m, int n_s, int n_b,
                                           Ordering ordering, double unitary_tol) {
  if (n_s < 1 || n_b < 1)
    throw dimension_error("BipartiteUnitary: n_s and n_b must be positive");
  const Eigen::Index dim = Eigen::Index(n_s) * n_b;
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream msg;
    msg << "BipartiteUnitary: matrix is " << m.rows() << "x" << m.cols()
        << " but n_s*n_b = " << dim;
    throw dimension_error(msg.str());
  }
  if (!m.allFinite())
    throw domain_error("BipartiteUnitary: matrix has non-finite entries");
  const double tol = unitary_tol >= 0.0 ? unitary_tol : unitary_input_tol(int(dim));
  const double residual = unitarity_residual(m);
  if (residual > tol) {
    std::ostringstream msg;
    msg << "BipartiteUnitary: matrix is not unitary, ||U^dag U - I||_F = "
        << residual << " exceeds tolerance " << tol;
    throw not_unitary_error(msg.str(), residual);
  }
  return BipartiteUnitary{std::move(m), n_s, n_b, ordering};
}

Matrix block(const BipartiteUnitary& u, int i, int j) {
  const int grid = u.block_grid();
  const int d = u.block_dim();
  if (i < 0 || j < 0 || i >= grid || j >= grid) {
    std::ostringstream msg;
    msg << "block: index (" << i << ", " << j << ") outside " << grid << "x"
        << grid << " grid";
    throw dimension_error(msg.str());
  }
  return u.matrix.block(Eigen::Index(i) * d, Eigen::Index(j) * d, d, d);
}

Matrix swap_kron_factors(const Matrix& m, int n_first, int n_second) {
  const Eigen::Index dim = Eigen::Index(n_first) * n_second;
  if (m.rows() != dim || m.cols() != dim)
    throw dimension_error("swap_kron_factors: dimensions do not match factors");
  Matrix out(dim, dim);
  // index a*n_second + b  ->  b*n_first + a
  for (int a = 0; a < n_first; ++a)
    for (int b = 0; b < n_second; ++b)
      for (int c = 0; c < n_first; ++c)
        for (int d = 0; d < n_second; ++d)
          out(Eigen::Index(b) * n_first + a, Eigen::Index(d) * n_first + c) =
              m(Eigen::Index(a) * n_second + b, Eigen::Index(c) * n_second + d);
  return out;
}

BipartiteUnitary with_ordering(const BipartiteUnitary& u, Ordering target) {
  if (u.ordering == target) return u;
  Matrix swapped = (u.ordering == Ordering::SystemFirst)
                       ? swap_kron_factors(u.matrix, u.n_s, u.n_b)
                       : swap_kron_factors(u.matrix, u.n_b, u.n_s);
  return BipartiteUnitary{std::move(swapped), u.n_s, u.n_b, target};
}

Matrix embed_ideal(const Matrix& g, const Matrix& phi, Ordering ordering) {
  return ordering == Ordering::SystemFirst ? kron(g, phi) : kron(phi, g);
}

}  // namespace gatedist
