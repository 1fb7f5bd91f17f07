#pragma once

#include "gatedist/spectral.hpp"

#include <vector>

namespace gatedist {

/// A state vector expected to be normalized is not, within tolerance.
struct not_normalized_error : std::invalid_argument {
  not_normalized_error(const std::string& what, double norm)
      : std::invalid_argument(what), norm(norm) {}
  double norm;
};

/// Pure uncorrelated environment state |psi_B>.
struct EnvState {
  Vector amplitudes;

  int dim() const { return int(amplitudes.size()); }

  /// Validates sum |psi_i|^2 = 1 within 1e-10.
  static EnvState checked(Vector amplitudes);
};

/// Operation elements S_k of the reduced channel on the system, with
/// sum_k S_k^dag S_k = I_S.
struct KrausSet {
  std::vector<Matrix> elements;
  double completeness_residual = 0.0;  // ||sum S_k^dag S_k - I||_F
};

/// Extracts the n_b Kraus elements S_k = sum_i psi_i U_(ki) from the
/// BathFirst blocks of u (SystemFirst inputs are re-blocked first).
KrausSet kraus_from_unitary(const BipartiteUnitary& u, const EnvState& env);

/// Channel action sum_k S_k rho S_k^dag.
Matrix apply_channel(const KrausSet& kraus, const Matrix& rho);

/// Upper fidelity bound (1/n_s^2) sum_k |Tr(g^dag S_k)|^2.
double f_upper(const KrausSet& kraus, const Matrix& g);

/// Euclidean gradient of rho -> sum_k |Tr(g^dag S_k rho)|^2 over Hermitian rho.
Matrix fidelity_gradient(const KrausSet& kraus, const Matrix& g, const Matrix& rho);

/// Euclidean projection of a real vector onto the probability simplex.
RealVector project_simplex(const RealVector& v);

/// Nearest density matrix: Hermitize, then project the spectrum onto the
/// probability simplex.
Matrix project_density(const Matrix& m);

struct FLowerResult {
  double value = 0.0;
  Matrix worst_density;
  int iterations = 0;
  bool converged = false;
};

/// Lower fidelity bound min over densities of sum_k |Tr(g^dag S_k rho)|^2,
/// by projected gradient with Armijo backtracking from rho = I/n_s.
FLowerResult f_lower(const KrausSet& kraus, const Matrix& g,
                     const SolverConfig& cfg = SolverConfig::fidelity_defaults());

/// Environment-averaged upper bound ||Gamma||_F^2 / (n_s^2 n_b). Either
/// blocking of u gives the same value.
double f_avg_upper(const BipartiteUnitary& u, const Matrix& g);

struct SandwichReport {
  double lhs = 0.0;   // (1 - d_F)^2
  double mid = 0.0;   // averaged upper fidelity bound
  double rhs = 0.0;   // 1 - d_F^2
  bool holds = false;
};

/// The distance-fidelity sandwich (1-d_F)^2 <= <f_upper> <= 1-d_F^2,
/// checked with 1e-9 slack.
SandwichReport check_sandwich(const BipartiteUnitary& u, const Matrix& g);

struct FidelityReport {
  double f_upper = 0.0;
  double f_lower = 0.0;
  Matrix worst_density;
  double worst_density_top_eig_share = 0.0;
  double completeness_residual = 0.0;
  int f_lower_iterations = 0;
  bool f_lower_converged = false;
};

/// Full per-environment report; f_lower's top-eigenvalue share >= 0.99 marks
/// the bound as a near-estimate of the worst-case pure-state fidelity.
FidelityReport fidelity_report(const BipartiteUnitary& u, const EnvState& env,
                               const Matrix& g,
                               const SolverConfig& cfg = SolverConfig::fidelity_defaults());

}  // namespace gatedist
