#include "gatedist/random.hpp"

#include <Eigen/QR>

#include <cmath>

namespace gatedist {

double Rng::uniform01() {
  // 53 random bits -> double in [0,1)
  return double(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Complex Rng::complex_normal() {
  return Complex(normal(), normal()) / std::sqrt(2.0);
}

Matrix haar_unitary(int n, Rng& rng) {
  if (n < 1) throw dimension_error("haar_unitary: dimension must be positive");
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

Matrix haar_unitary(int n, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(n, rng);
}

Vector haar_state(int n, Rng& rng) {
  if (n < 1) throw dimension_error("haar_state: dimension must be positive");
  Vector v(n);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

Matrix random_hermitian(int n, Rng& rng) {
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(rng.normal(), rng.normal());
  return 0.5 * (z + z.adjoint());
}

}  // namespace gatedist
