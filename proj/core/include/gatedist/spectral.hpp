#pragma once

#include "gatedist/frob.hpp"

#include <cstdint>

namespace gatedist {

/// Knobs shared by the first-order solvers. These surface as CLI flags.
struct SolverConfig {
  int max_iters = 5000;
  double tol = 1e-6;        // stall threshold on best-objective improvement
  int restarts = 3;         // random restarts in addition to deterministic starts
  std::uint64_t seed = 0;
  double step_scale = 0.1;  // subgradient step is step_scale/sqrt(k)

  static SolverConfig spectral_defaults() { return SolverConfig{}; }
  static SolverConfig fidelity_defaults() {
    SolverConfig cfg;
    cfg.max_iters = 2000;
    cfg.tol = 1e-10;
    return cfg;
  }
};

/// ||u - embed_ideal(g, phi)||_2, the objective of the relaxation.
double spectral_residual(const BipartiteUnitary& u, const Matrix& g,
                         const Matrix& phi);

/// Subgradient of phi -> ||U - G (x) phi||_2 at phi, from the top singular
/// pair (u1, v1) of the residual: -contract_blocks(u1 v1^dag, g). Valid as
/// a steepest-ascent representative wherever the top singular value is simple.
Matrix spectral_subgradient(const BipartiteUnitary& u, const Matrix& g,
                            const Matrix& phi);

/// Nearest matrix (Frobenius) with spectral norm <= 1: clip singular values.
Matrix project_spectral_ball(const Matrix& m);

struct RelaxedSolution {
  Matrix phi_bar;      // feasible: spectral norm <= 1
  double objective;    // ||u - embed(g, phi_bar)||_2
  int iterations;      // total subgradient iterations across starts
  bool converged;      // best run stopped by the stall criterion
};

/// Projected subgradient for min ||U - G (x) phi||_2 over ||phi||_2 <= 1,
/// warm-started at the Frobenius optimum plus zero plus cfg.restarts scaled
/// Haar starts, keeping the best iterate.
RelaxedSolution solve_relaxed_phi(const BipartiteUnitary& u, const Matrix& g,
                                  const SolverConfig& cfg);

struct SpecDistanceReport {
  double lower = 0.0;            // (1/sqrt(2)) ||U - G (x) phi_bar||_2
  double upper = 0.0;            // (1/sqrt(2)) ||U - G (x) phi_hat||_2
  Matrix phi_bar;                // relaxed optimizer, spectral norm <= 1
  Matrix phi_hat;                // unitary rounding of phi_bar
  RealVector phi_bar_singulars;
  int iterations = 0;
  bool converged = false;
};

/// Brackets the spectral-norm distance between the relaxation value and the
/// value at the unitary rounding phi_hat = W V^dag of phi_bar = W S V^dag.
/// If the rounding beats the relaxed iterate, it replaces it, so
/// lower <= upper always holds.
SpecDistanceReport spec_distance(const BipartiteUnitary& u, const Matrix& g,
                                 const SolverConfig& cfg);

}  // namespace gatedist
