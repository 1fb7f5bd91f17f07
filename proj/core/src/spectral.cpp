#include "gatedist/spectral.hpp"

#include "gatedist/random.hpp"

#include <cmath>
#include <vector>

namespace gatedist {

namespace {

constexpr double kZeroObjective = 1e-13;
constexpr int kStallWindow = 100;

void check_dims(const BipartiteUnitary& u, const Matrix& g) {
  if (g.rows() != u.n_s || g.cols() != u.n_s)
    throw dimension_error("spectral: g dimension does not match u.n_s");
}

struct RunResult {
  Matrix phi;
  double objective;
  int iterations;
  bool converged;
};

// one projected-subgradient descent from a given start
RunResult run_descent(const BipartiteUnitary& u, const Matrix& g,
                      const Matrix& start, const SolverConfig& cfg) {
  Matrix phi = project_spectral_ball(start);
  Matrix residual = u.matrix - embed_ideal(g, phi, u.ordering);
  SvdResult dec = svd(residual);

  double best = dec.singulars(0);
  Matrix best_phi = phi;
  double window_best = best;
  bool converged = best < kZeroObjective;
  int k = 0;
  const double step0 = cfg.step_scale * spectral_norm(g);

  while (!converged && k < cfg.max_iters) {
    ++k;
    const Matrix top_pair = dec.left.col(0) * dec.right.col(0).adjoint();
    const Matrix grad = -contract_blocks(top_pair, g, u.n_s, u.n_b, u.ordering);
    phi = project_spectral_ball(phi - (step0 / std::sqrt(double(k))) * grad);
    residual = u.matrix - embed_ideal(g, phi, u.ordering);
    dec = svd(residual);
    const double f = dec.singulars(0);
    if (f < best) {
      best = f;
      best_phi = phi;
    }
    if (best < kZeroObjective) {
      converged = true;
    } else if (k % kStallWindow == 0) {
      if (window_best - best < cfg.tol) converged = true;
      window_best = best;
    }
  }
  return {std::move(best_phi), best, k, converged};
}

}  // namespace

double spectral_residual(const BipartiteUnitary& u, const Matrix& g,
                         const Matrix& phi) {
  check_dims(u, g);
  return spectral_norm(u.matrix - embed_ideal(g, phi, u.ordering));
}

Matrix spectral_subgradient(const BipartiteUnitary& u, const Matrix& g,
                            const Matrix& phi) {
  check_dims(u, g);
  const SvdResult dec = svd(u.matrix - embed_ideal(g, phi, u.ordering));
  const Matrix top_pair = dec.left.col(0) * dec.right.col(0).adjoint();
  return -contract_blocks(top_pair, g, u.n_s, u.n_b, u.ordering);
}

Matrix project_spectral_ball(const Matrix& m) {
  SvdResult dec = svd(m);
  if (dec.singulars.size() == 0 || dec.singulars(0) <= 1.0) return m;
  RealVector clipped = dec.singulars.cwiseMin(1.0);
  return dec.left * clipped.asDiagonal() * dec.right.adjoint();
}

RelaxedSolution solve_relaxed_phi(const BipartiteUnitary& u, const Matrix& g,
                                  const SolverConfig& cfg) {
  check_dims(u, g);
  const int nb = u.n_b;

  std::vector<Matrix> starts;
  starts.push_back(frob_distance(u, g).phi_opt);  // warm start
  starts.push_back(Matrix::Zero(nb, nb));
  Rng rng(cfg.seed);
  for (int r = 0; r < cfg.restarts; ++r) starts.push_back(0.5 * haar_unitary(nb, rng));

  RelaxedSolution out;
  out.iterations = 0;
  bool first = true;
  for (const Matrix& start : starts) {
    RunResult run = run_descent(u, g, start, cfg);
    out.iterations += run.iterations;
    if (first || run.objective < out.objective) {
      out.objective = run.objective;
      out.phi_bar = std::move(run.phi);
      out.converged = run.converged;
      first = false;
    }
    if (out.objective < kZeroObjective) break;  // nothing left to improve
  }
  return out;
}

SpecDistanceReport spec_distance(const BipartiteUnitary& u, const Matrix& g,
                                 const SolverConfig& cfg) {
  RelaxedSolution rel = solve_relaxed_phi(u, g, cfg);

  SvdResult dec = svd(rel.phi_bar);
  Matrix phi_hat = dec.left * dec.right.adjoint();
  const double upper_residual = spectral_residual(u, g, phi_hat);

  // the rounding is itself feasible for the relaxation
  if (upper_residual < rel.objective) {
    rel.phi_bar = phi_hat;
    rel.objective = upper_residual;
    dec = svd(rel.phi_bar);
  }

  SpecDistanceReport report;
  report.lower = rel.objective / std::sqrt(2.0);
  report.upper = upper_residual / std::sqrt(2.0);
  report.phi_bar = std::move(rel.phi_bar);
  report.phi_hat = std::move(phi_hat);
  report.phi_bar_singulars = dec.singulars;
  report.iterations = rel.iterations;
  report.converged = rel.converged;
  return report;
}

}  // namespace gatedist
