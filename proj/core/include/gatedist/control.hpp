#pragma once

#include "gatedist/spectral.hpp"

#include <variant>
#include <vector>

namespace gatedist {

/// Per-coefficient bounds theta_lo <= theta <= theta_hi.
struct ThetaBox {
  RealVector lo;
  RealVector hi;
};

/// Norm ball ||theta - center|| <= radius.
struct ThetaBall {
  RealVector center;
  double radius = 0.0;
};

using ThetaSet = std::variant<ThetaBox, ThetaBall>;

int theta_dim(const ThetaSet& set);
bool theta_contains(const ThetaSet& set, const RealVector& theta, double tol = 0.0);
RealVector project_theta(const ThetaSet& set, RealVector theta);
RealVector theta_center(const ThetaSet& set);

/// Piecewise-constant control problem: N segments of length dt with
/// H_m = h_drift + sum_k theta_{k,m} h_controls[k]. Coefficient layout is
/// control-major: theta[k*N + m].
struct ControlProblem {
  Matrix h_drift;                  // Hermitian, n_s*n_b square (may be zero)
  std::vector<Matrix> h_controls;  // K Hermitian matrices, same dimension
  int segments = 1;                // N
  double dt = 1.0;
  ThetaSet theta_set;
  Matrix g_target;                 // n_s x n_s unitary
  int n_s = 0;
  int n_b = 0;
  Ordering ordering = Ordering::SystemFirst;

  int num_controls() const { return int(h_controls.size()); }
  int num_coeffs() const { return num_controls() * segments; }
};

/// Throws with a field-precise message on any structural defect.
void validate_problem(const ControlProblem& p);

/// Propagator U(theta) = exp(-i H_N dt) ... exp(-i H_1 dt). Coefficients
/// outside the feasible set are clipped with a warning on stderr.
BipartiteUnitary propagate(const ControlProblem& p, const RealVector& theta);

struct OptConfig {
  int outer_max = 100;
  double outer_tol = 1e-8;   // relative decrease per outer iteration
  int inner_max = 200;       // projected-gradient iterations per Step 2
  double fd_step = 1e-5;     // central-difference step
  bool single_step = false;  // take one accepted descent step per Step 2
};

struct OptRun {
  RealVector theta;
  Matrix phi;                          // n_b x n_b unitary from the last Step 1
  std::vector<double> objective_trace; // normalized residual per outer iteration
  int outer_iterations = 0;
  bool converged = false;
};

/// Alternating scheme: Step 1 solves phi exactly through the Gamma SVD,
/// Step 2 locally improves theta by projected gradient with central
/// differences, accepting only improvements, until the objective stops
/// decreasing.
OptRun alternate_optimize(const ControlProblem& p, RealVector theta0,
                          const OptConfig& cfg = OptConfig{});

/// Normalized Step-2 objective (1/sqrt(2 n_s n_b)) ||U(theta) - G (x) phi||_F.
double control_objective(const ControlProblem& p, const RealVector& theta,
                         const Matrix& phi);

/// Two-norm variant of Step 1: the unitary rounding phi_hat and the
/// upper-bound objective it certifies.
std::pair<Matrix, double> spec_variant_step(const ControlProblem& p,
                                            const RealVector& theta,
                                            const SolverConfig& cfg);

}  // namespace gatedist
