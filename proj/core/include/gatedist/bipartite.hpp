#pragma once

#include "gatedist/matrix.hpp"

#include <string>

namespace gatedist {

/// Tensor-factor order of the joint space. SystemFirst blocks the matrix as
/// G (x) Phi with n_b x n_b sub-blocks indexed by the system; BathFirst as
/// Phi (x) G with n_s x n_s sub-blocks indexed by the bath.
enum class Ordering { SystemFirst, BathFirst };

std::string to_string(Ordering o);
Ordering ordering_from_string(const std::string& s);

/// Unitary propagator on a system (x) bath space with a declared split.
struct BipartiteUnitary {
  Matrix matrix;
  int n_s = 0;
  int n_b = 0;
  Ordering ordering = Ordering::SystemFirst;

  int dim() const { return n_s * n_b; }

  /// Side length of one sub-block.
  int block_dim() const { return ordering == Ordering::SystemFirst ? n_b : n_s; }

  /// Number of sub-blocks along one side.
  int block_grid() const { return ordering == Ordering::SystemFirst ? n_s : n_b; }

  /// Validates dimensions and unitarity (tolerance defaults to
  /// unitary_input_tol(n_s * n_b)). Throws dimension_error / not_unitary_error.
  static BipartiteUnitary checked(Matrix m, int n_s, int n_b, Ordering ordering,
                                  double unitary_tol = -1.0);
};

/// The (i, j) sub-block of u in its own ordering. Indices run over
/// [0, block_grid()).
Matrix block(const BipartiteUnitary& u, int i, int j);

/// Re-expresses m, laid out with factor dims (n_first, n_second), in the
/// swapped factor order. Conjugation by the perfect-shuffle permutation.
Matrix swap_kron_factors(const Matrix& m, int n_first, int n_second);

/// Same unitary re-blocked in the requested ordering.
BipartiteUnitary with_ordering(const BipartiteUnitary& u, Ordering target);

/// kron(g, phi) for SystemFirst, kron(phi, g) for BathFirst.
Matrix embed_ideal(const Matrix& g, const Matrix& phi, Ordering ordering);

}  // namespace gatedist
