#include "gatedist/matrix.hpp"
#include "gatedist/random.hpp"

#include "support/oracles.hpp"
#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace gatedist;

namespace {

Matrix random_complex(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

}  // namespace

TEST_SUITE("matcore") {

TEST_CASE("kron of identities is identity") {
  const Matrix out = kron(Matrix::Identity(2, 2), Matrix::Identity(3, 3));
  CHECK((out - Matrix::Identity(6, 6)).norm() == 0.0);
}

TEST_CASE("kron with a permutation gives block anti-diagonal") {
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const Matrix out = kron(swap, Matrix::Identity(2, 2));
  Matrix expected = Matrix::Zero(4, 4);
  expected.block(0, 2, 2, 2) = Matrix::Identity(2, 2);
  expected.block(2, 0, 2, 2) = Matrix::Identity(2, 2);
  CHECK((out - expected).norm() == 0.0);
}

TEST_CASE("kron matches the index-formula oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_complex(2, 2, rng);
    const Matrix b = random_complex(2, 2, rng);
    CHECK((kron(a, b) - oracle::kron_index(a, b)).norm() == 0.0);
  }
}

TEST_CASE("svd of a non-negative diagonal is its diagonal") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  const SvdResult dec = svd(m);
  CHECK(dec.singulars(0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(dec.singulars(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("unitary input has all singular values 1") {
  Rng rng(7);
  const Matrix u = haar_unitary(5, rng);
  const SvdResult dec = svd(u);
  for (Eigen::Index i = 0; i < dec.singulars.size(); ++i)
    CHECK(std::abs(dec.singulars(i) - 1.0) <= 1e-10);
}

TEST_CASE("singular values squared are eigenvalues of m^dag m") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_complex(3, 3, rng);
    const SvdResult dec = svd(m);
    auto [evals, evecs] = herm_eig(m.adjoint() * m);  // independent route
    for (int i = 0; i < 3; ++i) {
      const double expected = std::sqrt(std::max(0.0, evals(2 - i)));
      CHECK(dec.singulars(i) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("svd reconstructs the input and has unitary factors") {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const int rows = 1 + int(rng.uniform01() * 32);
    const int cols = 1 + int(rng.uniform01() * 32);
    const Matrix m = random_complex(rows, cols, rng);
    const SvdResult dec = svd(m);
    CHECK((dec.reconstruct() - m).norm() <= 1e-10 * m.norm());
    CHECK(unitarity_residual(dec.left) <= 1e-10 * std::sqrt(double(rows)));
    CHECK(unitarity_residual(dec.right) <= 1e-10 * std::sqrt(double(cols)));
    for (Eigen::Index i = 0; i + 1 < dec.singulars.size(); ++i)
      CHECK(dec.singulars(i) >= dec.singulars(i + 1));
    CHECK(dec.singulars(dec.singulars.size() - 1) >= 0.0);
  }
}

TEST_CASE("trace norm of identity and scalings") {
  CHECK(trace_norm(Matrix::Identity(5, 5)) == doctest::Approx(5.0).epsilon(1e-14));
  const Complex c(-2.0, 1.5);
  const Matrix m = c * Matrix::Identity(4, 4);
  CHECK(trace_norm(m) == doctest::Approx(4.0 * std::abs(c)).epsilon(1e-14));
}

TEST_CASE("trace norm matches Tr sqrt(m^dag m) via the eigensolver") {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_complex(4, 4, rng);
    auto [evals, evecs] = herm_eig(m.adjoint() * m);
    double expected = 0.0;
    for (Eigen::Index i = 0; i < evals.size(); ++i)
      expected += std::sqrt(std::max(0.0, evals(i)));
    CHECK(trace_norm(m) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("spectral norm basics") {
  CHECK(spectral_norm(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = -5.0;
  CHECK(spectral_norm(m) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("frobenius norm basics and svd identity") {
  CHECK(frobenius_norm(Matrix::Identity(7, 7)) ==
        doctest::Approx(std::sqrt(7.0)).epsilon(1e-14));
  CHECK(frobenius_norm(Matrix::Zero(3, 4)) == 0.0);
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_complex(3, 5, rng);
    CHECK(frobenius_norm(m) ==
          doctest::Approx(std::sqrt(svd(m).singulars.squaredNorm())).epsilon(1e-12));
  }
}

TEST_CASE("norm inequalities on random samples") {
  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 1 + int(rng.uniform01() * 6);
    const int cols = 1 + int(rng.uniform01() * 6);
    const Matrix m = random_complex(rows, cols, rng);
    const double tn = trace_norm(m), fn = frobenius_norm(m), sn = spectral_norm(m);
    const double slack = 1e-12 * (1.0 + fn);
    CHECK(tn >= fn - slack);
    CHECK(fn >= sn - slack);
    CHECK(tn <= std::sqrt(double(std::min(rows, cols))) * fn + slack);
    // rank of a dense Gaussian sample is min(rows, cols)
    CHECK(fn <= std::sqrt(double(std::min(rows, cols))) * sn + slack);
  }
}

TEST_CASE("is_unitary accepts unitaries and rejects the rest") {
  CHECK(is_unitary(Matrix::Identity(4, 4), 1e-10));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 2.0;
  CHECK_FALSE(is_unitary(m, 1e-10));
  CHECK_THROWS_AS(is_unitary(Matrix::Zero(2, 3), 1e-10), dimension_error);

  Rng rng(31);
  const Matrix z = random_complex(4, 4, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  const Matrix q = qr.householderQ();
  CHECK(is_unitary(q, 1e-8));
}

TEST_CASE("haar unitary: unit scalar at n=1, unitary in general") {
  Rng rng(37);
  const Matrix u1 = haar_unitary(1, rng);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) <= 1e-12);
  for (int n = 2; n <= 6; ++n) {
    const Matrix u = haar_unitary(n, rng);
    CHECK(is_unitary(u, 1e-10));
  }
}

TEST_CASE("haar moment: E|u_11|^2 = 1/n at n=2") {
  Rng rng(41);
  const int samples = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double v = std::norm(haar_unitary(2, rng)(0, 0));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, sum2 / samples - mean * mean);
  const double se = std::sqrt(var / samples);
  CHECK(std::abs(mean - 0.5) <= 3.0 * se);
}

TEST_CASE("herm_eig on diagonal and identity") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  d(2, 2) = 3.0;
  auto [evals, evecs] = herm_eig(d);
  CHECK(evals(0) == doctest::Approx(1.0));
  CHECK(evals(1) == doctest::Approx(2.0));
  CHECK(evals(2) == doctest::Approx(3.0));
  auto [ones, v] = herm_eig(Matrix::Identity(4, 4));
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(ones(i) == doctest::Approx(1.0));
}

TEST_CASE("herm_eig: trace equals eigenvalue sum, reconstruction holds") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix h = random_hermitian(5, rng);
    auto [evals, evecs] = herm_eig(h);
    CHECK(std::abs(evals.sum() - h.trace().real()) <= 1e-10 * (1.0 + h.norm()));
    const Matrix rebuilt = evecs * evals.asDiagonal() * evecs.adjoint();
    CHECK((rebuilt - h).norm() <= 1e-10 * std::max(1.0, h.norm()));
    CHECK(unitarity_residual(evecs) <= 1e-12 * 5.0);
  }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  CHECK_THROWS_AS(herm_eig(m), domain_error);
}

TEST_CASE("herm_exp produces the expected diagonal phases") {
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 0.7;
  const Matrix u = herm_exp(h, -1.3);
  CHECK(std::abs(u(0, 0) - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(u(1, 1) - std::exp(Complex(0, -1.3 * 0.7))) <= 1e-14);
  CHECK(std::abs(u(0, 1)) <= 1e-14);
}

TEST_CASE("svd rejects non-finite input") {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 0) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(svd(m), domain_error);
}

}  // TEST_SUITE
