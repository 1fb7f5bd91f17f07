#pragma once

#include "gatedist/bipartite.hpp"

namespace gatedist {

/// The n_b x n_b contraction of U's sub-blocks against G whose trace norm
/// gives the Frobenius distance. SystemFirst: Gamma = sum_ij conj(G_ij) U_(ij);
/// BathFirst: Gamma_ij = Tr(G^dag U_(ij)).
struct GammaMatrix {
  Matrix gamma;
  Ordering ordering;
  SvdResult svd;  // computed eagerly at construction
};

/// Contracts a full-space matrix a against g block-wise, following the given
/// blocking. This is both the Gamma construction (a = U) and the adjoint of
/// phi -> g (x) phi applied to a.
Matrix contract_blocks(const Matrix& a, const Matrix& g, int n_s, int n_b,
                       Ordering ordering);

GammaMatrix gamma(const BipartiteUnitary& u, const Matrix& g);

struct FrobDistanceReport {
  double distance = 0.0;           // in [0, 1]
  double gamma_trace_norm = 0.0;
  Matrix phi_opt;                  // n_b x n_b unitary achieving the distance
};

/// Closed-form Frobenius distance: sqrt(1 - ||Gamma||_tr / (n_s n_b)), with
/// the optimizing phi from the SVD of Gamma. Gamma = 0 falls back to
/// distance 1, phi_opt = I.
FrobDistanceReport frob_distance(const BipartiteUnitary& u, const Matrix& g);
FrobDistanceReport frob_distance(const GammaMatrix& gm, int n_s, int n_b);

/// Distance for an exactly factorized propagator u_s (x) u_b, which is
/// independent of u_b: sqrt(1 - |Tr(g^dag u_s)| / n_s).
double frob_distance_exact_tensor(const Matrix& u_s, const Matrix& g);

}  // namespace gatedist
