#include "gatedist/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gatedist {

namespace {

constexpr double kCompletenessTol = 1e-8;
constexpr double kArmijoBeta = 0.5;
constexpr double kArmijoC = 1e-4;
constexpr int kArmijoMaxHalvings = 60;
constexpr int kStallWindow = 50;

double objective(const std::vector<Matrix>& a_k, const Matrix& rho) {
  double q = 0.0;
  for (const Matrix& a : a_k) q += std::norm((a * rho).trace());
  return q;
}

Matrix objective_gradient(const std::vector<Matrix>& a_k, const Matrix& rho) {
  Matrix grad = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& a : a_k) {
    const Complex c = (a * rho).trace();
    grad += std::conj(c) * a + c * a.adjoint();
  }
  return grad;
}

std::vector<Matrix> overlap_operators(const KrausSet& kraus, const Matrix& g) {
  if (kraus.elements.empty())
    throw dimension_error("fidelity: empty Kraus set");
  const Eigen::Index n = g.rows();
  if (g.cols() != n)
    throw dimension_error("fidelity: g must be square");
  std::vector<Matrix> a_k;
  a_k.reserve(kraus.elements.size());
  for (const Matrix& s : kraus.elements) {
    if (s.rows() != n || s.cols() != n)
      throw dimension_error("fidelity: Kraus element dimension does not match g");
    a_k.push_back(g.adjoint() * s);
  }
  return a_k;
}

}  // namespace

EnvState EnvState::checked(Vector amplitudes) {
  if (amplitudes.size() < 1)
    throw dimension_error("EnvState: amplitudes must be non-empty");
  if (!amplitudes.allFinite())
    throw domain_error("EnvState: amplitudes have non-finite entries");
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "EnvState: amplitudes have norm " << norm << ", expected 1";
    throw not_normalized_error(msg.str(), norm);
  }
  return EnvState{std::move(amplitudes)};
}

KrausSet kraus_from_unitary(const BipartiteUnitary& u, const EnvState& env) {
  if (env.dim() != u.n_b) {
    std::ostringstream msg;
    msg << "kraus_from_unitary: environment dimension " << env.dim()
        << " does not match n_b = " << u.n_b;
    throw dimension_error(msg.str());
  }
  const BipartiteUnitary ub = with_ordering(u, Ordering::BathFirst);

  KrausSet out;
  out.elements.reserve(u.n_b);
  for (int k = 0; k < u.n_b; ++k) {
    Matrix s = Matrix::Zero(u.n_s, u.n_s);
    for (int i = 0; i < u.n_b; ++i) s += env.amplitudes(i) * block(ub, k, i);
    out.elements.push_back(std::move(s));
  }

  Matrix sum = Matrix::Zero(u.n_s, u.n_s);
  for (const Matrix& s : out.elements) sum += s.adjoint() * s;
  out.completeness_residual = (sum - Matrix::Identity(u.n_s, u.n_s)).norm();
  if (out.completeness_residual > kCompletenessTol) {
    std::ostringstream msg;
    msg << "kraus_from_unitary: completeness residual "
        << out.completeness_residual << " exceeds " << kCompletenessTol
        << " (input not unitary enough)";
    throw not_unitary_error(msg.str(), out.completeness_residual);
  }
  return out;
}

Matrix apply_channel(const KrausSet& kraus, const Matrix& rho) {
  if (kraus.elements.empty())
    throw dimension_error("apply_channel: empty Kraus set");
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& s : kraus.elements) out += s * rho * s.adjoint();
  return out;
}

double f_upper(const KrausSet& kraus, const Matrix& g) {
  const auto a_k = overlap_operators(kraus, g);
  const double n_s = double(g.rows());
  double sum = 0.0;
  for (const Matrix& a : a_k) sum += std::norm(a.trace());
  return sum / (n_s * n_s);
}

Matrix fidelity_gradient(const KrausSet& kraus, const Matrix& g, const Matrix& rho) {
  if (rho.rows() != g.rows() || rho.cols() != g.rows())
    throw dimension_error("fidelity_gradient: rho dimension does not match g");
  return objective_gradient(overlap_operators(kraus, g), rho);
}

RealVector project_simplex(const RealVector& v) {
  const Eigen::Index n = v.size();
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += sorted[size_t(i)];
    const double t = (cumulative - 1.0) / double(i + 1);
    if (sorted[size_t(i)] - t > 0.0) threshold = t;
  }
  return (v.array() - threshold).cwiseMax(0.0);
}

Matrix project_density(const Matrix& m) {
  if (m.rows() != m.cols())
    throw dimension_error("project_density: matrix is not square");
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  if (es.info() != Eigen::Success)
    throw decomposition_error("project_density: eigensolver did not converge");
  const RealVector w = project_simplex(es.eigenvalues());
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

FLowerResult f_lower(const KrausSet& kraus, const Matrix& g,
                     const SolverConfig& cfg) {
  const auto a_k = overlap_operators(kraus, g);
  const Eigen::Index n = g.rows();

  Matrix rho = Matrix::Identity(n, n) / double(n);
  double f = objective(a_k, rho);
  double window_best = f;

  FLowerResult out;
  out.converged = false;
  int it = 0;
  while (it < cfg.max_iters) {
    ++it;
    const Matrix grad = objective_gradient(a_k, rho);
    double t = 1.0;
    Matrix candidate;
    double f_candidate = f;
    bool accepted = false;
    for (int h = 0; h < kArmijoMaxHalvings; ++h) {
      candidate = project_density(rho - t * grad);
      f_candidate = objective(a_k, candidate);
      const double decrease = (grad.adjoint() * (rho - candidate)).trace().real();
      if (f_candidate <= f - kArmijoC * decrease && f_candidate < f) {
        accepted = true;
        break;
      }
      t *= kArmijoBeta;
    }
    if (!accepted) {
      out.converged = true;  // projected-gradient fixed point
      break;
    }
    rho = candidate;
    f = f_candidate;
    if (it % kStallWindow == 0) {
      if (window_best - f < cfg.tol) {
        out.converged = true;
        break;
      }
      window_best = f;
    }
  }
  out.value = f;  // trace-one rho already carries the normalization
  out.worst_density = std::move(rho);
  out.iterations = it;
  return out;
}

double f_avg_upper(const BipartiteUnitary& u, const Matrix& g) {
  const GammaMatrix gm = gamma(u, g);
  const double n_s = double(u.n_s);
  return gm.gamma.squaredNorm() / (n_s * n_s * double(u.n_b));
}

SandwichReport check_sandwich(const BipartiteUnitary& u, const Matrix& g) {
  const double d = frob_distance(u, g).distance;
  SandwichReport report;
  report.lhs = (1.0 - d) * (1.0 - d);
  report.mid = f_avg_upper(u, g);
  report.rhs = 1.0 - d * d;
  report.holds =
      report.lhs <= report.mid + 1e-9 && report.mid <= report.rhs + 1e-9;
  return report;
}

FidelityReport fidelity_report(const BipartiteUnitary& u, const EnvState& env,
                               const Matrix& g, const SolverConfig& cfg) {
  const KrausSet kraus = kraus_from_unitary(u, env);
  FidelityReport report;
  report.completeness_residual = kraus.completeness_residual;
  report.f_upper = f_upper(kraus, g);
  FLowerResult lower = f_lower(kraus, g, cfg);
  report.f_lower = lower.value;
  report.worst_density = std::move(lower.worst_density);
  report.f_lower_iterations = lower.iterations;
  report.f_lower_converged = lower.converged;
  Eigen::SelfAdjointEigenSolver<Matrix> es(report.worst_density);
  report.worst_density_top_eig_share = es.eigenvalues().maxCoeff();
  return report;
}

}  // namespace gatedist
