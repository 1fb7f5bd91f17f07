#include "gatedist/control.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace gatedist {

namespace {

constexpr double kArmijoBeta = 0.5;
constexpr double kArmijoC = 1e-4;
constexpr int kArmijoMaxHalvings = 40;

void check_theta_size(const ControlProblem& p, const RealVector& theta) {
  if (theta.size() != p.num_coeffs()) {
    std::ostringstream msg;
    msg << "theta has " << theta.size() << " coefficients, expected K*N = "
        << p.num_coeffs();
    throw dimension_error(msg.str());
  }
}

// propagator without the feasible-set check: finite-difference probes and
// line-search candidates may sit (slightly) outside the set
Matrix propagate_unchecked(const ControlProblem& p, const RealVector& theta) {
  const Eigen::Index dim = Eigen::Index(p.n_s) * p.n_b;
  const int n = p.segments;
  const int k_count = p.num_controls();
  Matrix u = Matrix::Identity(dim, dim);
  for (int m = 0; m < n; ++m) {
    Matrix h = (p.h_drift.size() != 0) ? p.h_drift : Matrix::Zero(dim, dim);
    for (int k = 0; k < k_count; ++k)
      h += theta(Eigen::Index(k) * n + m) * p.h_controls[size_t(k)];
    u = herm_exp(h, -p.dt) * u;
  }
  return u;
}

// Frobenius-normalized residual at (theta, phi)
double objective_at(const ControlProblem& p, const RealVector& theta,
                    const Matrix& phi) {
  const Matrix ideal = embed_ideal(p.g_target, phi, p.ordering);
  return (propagate_unchecked(p, theta) - ideal).norm() /
         std::sqrt(2.0 * p.n_s * p.n_b);
}

RealVector central_diff_gradient(const ControlProblem& p, const RealVector& theta,
                                 const Matrix& phi, double h) {
  RealVector grad(theta.size());
  RealVector probe = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const double saved = probe(i);
    probe(i) = saved + h;
    const double fp = objective_at(p, probe, phi);
    probe(i) = saved - h;
    const double fm = objective_at(p, probe, phi);
    probe(i) = saved;
    grad(i) = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Step 2: projected gradient on theta at fixed phi; returns improved theta
// and its objective. Never returns a worse point than the input.
std::pair<RealVector, double> improve_theta(const ControlProblem& p,
                                            RealVector theta, const Matrix& phi,
                                            double f0, const OptConfig& cfg) {
  double f = f0;
  const int cap = cfg.single_step ? 1 : cfg.inner_max;
  double t_start = 1.0;  // warm-started across inner iterations
  for (int it = 0; it < cap; ++it) {
    const RealVector grad = central_diff_gradient(p, theta, phi, cfg.fd_step);
    if (grad.norm() == 0.0) break;
    double t = t_start;
    bool accepted = false;
    RealVector candidate;
    double f_candidate = f;
    for (int h = 0; h < kArmijoMaxHalvings; ++h) {
      candidate = project_theta(p.theta_set, theta - t * grad);
      f_candidate = objective_at(p, candidate, phi);
      const double decrease = grad.dot(theta - candidate);
      if (f_candidate <= f - kArmijoC * decrease && f_candidate < f) {
        accepted = true;
        break;
      }
      t *= kArmijoBeta;
    }
    if (!accepted) break;
    theta = candidate;
    f = f_candidate;
    t_start = std::min(1.0, 2.0 * t);
    if (f < 1e-14) break;
  }
  return {std::move(theta), f};
}

}  // namespace

int theta_dim(const ThetaSet& set) {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ThetaBox>)
          return int(s.lo.size());
        else
          return int(s.center.size());
      },
      set);
}

bool theta_contains(const ThetaSet& set, const RealVector& theta, double tol) {
  if (theta.size() != theta_dim(set)) return false;
  if (const auto* box = std::get_if<ThetaBox>(&set)) {
    return (theta.array() >= box->lo.array() - tol).all() &&
           (theta.array() <= box->hi.array() + tol).all();
  }
  const auto& ball = std::get<ThetaBall>(set);
  return (theta - ball.center).norm() <= ball.radius + tol;
}

RealVector project_theta(const ThetaSet& set, RealVector theta) {
  if (theta.size() != theta_dim(set))
    throw dimension_error("project_theta: theta dimension does not match set");
  if (const auto* box = std::get_if<ThetaBox>(&set))
    return theta.cwiseMax(box->lo).cwiseMin(box->hi);
  const auto& ball = std::get<ThetaBall>(set);
  const RealVector d = theta - ball.center;
  const double norm = d.norm();
  if (norm <= ball.radius) return theta;
  return ball.center + (ball.radius / norm) * d;
}

RealVector theta_center(const ThetaSet& set) {
  if (const auto* box = std::get_if<ThetaBox>(&set))
    return 0.5 * (box->lo + box->hi);
  return std::get<ThetaBall>(set).center;
}

void validate_problem(const ControlProblem& p) {
  if (p.n_s < 1 || p.n_b < 1)
    throw dimension_error("problem: n_s and n_b must be positive");
  const Eigen::Index dim = Eigen::Index(p.n_s) * p.n_b;
  if (p.segments < 1) throw domain_error("problem: segments must be positive");
  if (!(p.dt > 0.0)) throw domain_error("problem: dt must be positive");
  if (p.h_controls.empty())
    throw domain_error("problem: at least one control Hamiltonian is required");

  auto check_herm = [&](const Matrix& h, const std::string& name) {
    if (h.rows() != dim || h.cols() != dim) {
      std::ostringstream msg;
      msg << "problem: " << name << " is " << h.rows() << "x" << h.cols()
          << ", expected " << dim << "x" << dim;
      throw dimension_error(msg.str());
    }
    if ((h - h.adjoint()).norm() > 1e-10 * std::max(1.0, h.norm()))
      throw domain_error("problem: " + name + " is not Hermitian");
  };
  if (p.h_drift.size() != 0) check_herm(p.h_drift, "h_drift");
  for (size_t k = 0; k < p.h_controls.size(); ++k)
    check_herm(p.h_controls[k], "h_controls[" + std::to_string(k) + "]");

  if (theta_dim(p.theta_set) != p.num_coeffs()) {
    std::ostringstream msg;
    msg << "problem: theta set has dimension " << theta_dim(p.theta_set)
        << ", expected K*N = " << p.num_coeffs();
    throw dimension_error(msg.str());
  }
  if (const auto* box = std::get_if<ThetaBox>(&p.theta_set)) {
    if ((box->lo.array() > box->hi.array()).any())
      throw domain_error("problem: theta_lo exceeds theta_hi");
  } else if (std::get<ThetaBall>(p.theta_set).radius < 0.0) {
    throw domain_error("problem: theta ball radius must be non-negative");
  }
  if (p.g_target.rows() != p.n_s || p.g_target.cols() != p.n_s)
    throw dimension_error("problem: g_target must be n_s x n_s");
  if (unitarity_residual(p.g_target) > unitary_input_tol(p.n_s))
    throw not_unitary_error("problem: g_target is not unitary",
                            unitarity_residual(p.g_target));
}

BipartiteUnitary propagate(const ControlProblem& p, const RealVector& theta_in) {
  check_theta_size(p, theta_in);
  RealVector theta = theta_in;
  if (!theta_contains(p.theta_set, theta, 1e-12)) {
    std::cerr << "gatedist: warning: theta outside the feasible set, clipping\n";
    theta = project_theta(p.theta_set, std::move(theta));
  }
  return BipartiteUnitary{propagate_unchecked(p, theta), p.n_s, p.n_b, p.ordering};
}

double control_objective(const ControlProblem& p, const RealVector& theta,
                         const Matrix& phi) {
  check_theta_size(p, theta);
  return objective_at(p, theta, phi);
}

OptRun alternate_optimize(const ControlProblem& p, RealVector theta0,
                          const OptConfig& cfg) {
  validate_problem(p);
  check_theta_size(p, theta0);
  RealVector theta = project_theta(p.theta_set, std::move(theta0));

  OptRun run;
  run.converged = false;

  // Step 1 at the start: exact phi for the initial theta
  BipartiteUnitary u = propagate(p, theta);
  Matrix phi = frob_distance(u, p.g_target).phi_opt;
  double f = objective_at(p, theta, phi);
  run.objective_trace.push_back(f);

  int outer = 0;
  while (outer < cfg.outer_max) {
    ++outer;
    // Step 2: local improvement of theta at fixed phi
    RealVector theta_next = improve_theta(p, theta, phi, f, cfg).first;
    const bool theta_moved = (theta_next - theta).norm() > 0.0;
    theta = std::move(theta_next);

    // Step 1: exact phi at the new theta; its value can only improve on
    // Step 2's, so the trace stays non-increasing
    u = propagate(p, theta);
    phi = frob_distance(u, p.g_target).phi_opt;
    const double f_next = objective_at(p, theta, phi);

    const double decrease = run.objective_trace.back() - f_next;
    f = f_next;
    run.objective_trace.push_back(f);

    if (!theta_moved || decrease < cfg.outer_tol) {
      run.converged = true;
      break;
    }
  }

  run.theta = std::move(theta);
  run.phi = std::move(phi);
  run.outer_iterations = outer;
  return run;
}

std::pair<Matrix, double> spec_variant_step(const ControlProblem& p,
                                            const RealVector& theta,
                                            const SolverConfig& cfg) {
  check_theta_size(p, theta);
  const BipartiteUnitary u = propagate(p, theta);
  SpecDistanceReport report = spec_distance(u, p.g_target, cfg);
  return {std::move(report.phi_hat), report.upper};
}

}  // namespace gatedist
