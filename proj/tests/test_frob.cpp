#include "gatedist/frob.hpp"
#include "gatedist/random.hpp"

#include "support/oracles.hpp"
#include "support/test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace gatedist;
using test::product_bipartite;
using test::random_bipartite;

TEST_SUITE("frob_distance") {

TEST_CASE("blocks of a Kronecker product follow the definition") {
  Rng rng(3);
  const Matrix g = haar_unitary(3, rng);
  const Matrix phi = haar_unitary(2, rng);

  const BipartiteUnitary sf = product_bipartite(g, phi, Ordering::SystemFirst);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK((block(sf, i, j) - g(i, j) * phi).norm() <= 1e-15);

  const BipartiteUnitary bf = product_bipartite(g, phi, Ordering::BathFirst);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK((block(bf, i, j) - phi(i, j) * g).norm() <= 1e-15);
}

TEST_CASE("reassembling all blocks reproduces the matrix exactly") {
  Rng rng(5);
  for (Ordering ord : {Ordering::SystemFirst, Ordering::BathFirst}) {
    const BipartiteUnitary u = random_bipartite(3, 2, ord, rng);
    Matrix rebuilt(u.dim(), u.dim());
    const int d = u.block_dim();
    for (int i = 0; i < u.block_grid(); ++i)
      for (int j = 0; j < u.block_grid(); ++j)
        rebuilt.block(i * d, j * d, d, d) = block(u, i, j);
    CHECK((rebuilt - u.matrix).norm() == 0.0);
  }
}

TEST_CASE("block index out of range throws") {
  Rng rng(7);
  const BipartiteUnitary u = random_bipartite(2, 3, Ordering::SystemFirst, rng);
  CHECK_THROWS_AS(block(u, 2, 0), dimension_error);
  CHECK_THROWS_AS(block(u, 0, -1), dimension_error);
}

TEST_CASE("gamma of an exact product is n_s * phi, both orderings") {
  Rng rng(11);
  const Matrix g = haar_unitary(2, rng);
  const Matrix phi = haar_unitary(3, rng);

  const GammaMatrix gm_sf =
      gamma(product_bipartite(g, phi, Ordering::SystemFirst), g);
  CHECK((gm_sf.gamma - 2.0 * phi).norm() <= 1e-13);

  const GammaMatrix gm_bf =
      gamma(product_bipartite(g, phi, Ordering::BathFirst), g);
  CHECK((gm_bf.gamma - 2.0 * phi).norm() <= 1e-13);
}

TEST_CASE("gamma matches the scalar-loop oracle") {
  Rng rng(13);
  for (Ordering ord : {Ordering::SystemFirst, Ordering::BathFirst}) {
    for (int trial = 0; trial < 10; ++trial) {
      const BipartiteUnitary u = random_bipartite(2, 2, ord, rng);
      const Matrix g = haar_unitary(2, rng);
      const Matrix expected = oracle::gamma_loops(u.matrix, g, 2, 2, ord);
      CHECK((gamma(u, g).gamma - expected).norm() <= 1e-14);
    }
  }
}

TEST_CASE("gamma rejects mismatched gate dimension") {
  Rng rng(17);
  const BipartiteUnitary u = random_bipartite(2, 2, Ordering::SystemFirst, rng);
  CHECK_THROWS_AS(gamma(u, haar_unitary(3, rng)), dimension_error);
}

TEST_CASE("exact product has distance zero") {
  Rng rng(19);
  for (int n_b : {1, 2, 3}) {
    const Matrix g = haar_unitary(2, rng);
    const Matrix phi = haar_unitary(n_b, rng);
    const auto report =
        frob_distance(product_bipartite(g, phi, Ordering::SystemFirst), g);
    // sqrt amplifies the trace-norm roundoff near zero, hence 1e-7
    CHECK(report.distance <= 1e-7);
  }
}

TEST_CASE("n_b = 1 closed form: diag(1, i) against the identity") {
  Matrix u(2, 2);
  u << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0, 1);
  const BipartiteUnitary bu{u, 2, 1, Ordering::SystemFirst};
  const auto report = frob_distance(bu, Matrix::Identity(2, 2));
  // 1x1 Gamma = 1 + i, so d = sqrt(1 - sqrt(2)/2)
  const double expected = std::sqrt(1.0 - std::sqrt(2.0) / 2.0);
  CHECK(report.distance == doctest::Approx(expected).epsilon(1e-12));
  CHECK(report.distance == doctest::Approx(0.5411961001461969).epsilon(1e-12));

  // brute-force phase grid over phi = e^{i a}
  double best = 2.0;
  const int grid = 20000;
  for (int k = 0; k < grid; ++k) {
    const double a = 2.0 * M_PI * k / grid;
    const Matrix ideal = std::exp(Complex(0, a)) * Matrix::Identity(2, 2);
    best = std::min(best, (u - ideal).norm() / std::sqrt(2.0 * 2.0 * 1.0));
  }
  CHECK(report.distance == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("reported distance is the value at phi_opt and beats random phis") {
  Rng rng(23);
  for (Ordering ord : {Ordering::SystemFirst, Ordering::BathFirst}) {
    const BipartiteUnitary u = random_bipartite(2, 2, ord, rng);
    const Matrix g = haar_unitary(2, rng);
    const auto report = frob_distance(u, g);
    const double norm_factor = std::sqrt(2.0 * u.n_s * u.n_b);
    const double at_opt =
        (u.matrix - embed_ideal(g, report.phi_opt, ord)).norm() / norm_factor;
    CHECK(std::abs(at_opt - report.distance) <= 1e-10);
    for (int s = 0; s < 1000; ++s) {
      const Matrix phi = haar_unitary(u.n_b, rng);
      const double val = (u.matrix - embed_ideal(g, phi, ord)).norm() / norm_factor;
      CHECK(report.distance <= val + 1e-9);
    }
  }
}

TEST_CASE("optimality certificate through the trace inner product") {
  Rng rng(29);
  const BipartiteUnitary u = random_bipartite(3, 2, Ordering::SystemFirst, rng);
  const Matrix g = haar_unitary(3, rng);
  const GammaMatrix gm = gamma(u, g);
  const auto report = frob_distance(u, g);
  const double tn = report.gamma_trace_norm;
  CHECK(std::abs((gm.gamma * report.phi_opt.adjoint()).trace().real() - tn) <=
        1e-10);
  for (int s = 0; s < 500; ++s) {
    const Matrix phi = haar_unitary(2, rng);
    CHECK((gm.gamma * phi.adjoint()).trace().real() <= tn + 1e-10);
  }
}

TEST_CASE("global phase invariance") {
  Rng rng(31);
  const BipartiteUnitary u = random_bipartite(2, 3, Ordering::SystemFirst, rng);
  const Matrix g = haar_unitary(2, rng);
  const double base = frob_distance(u, g).distance;
  for (double alpha : {0.3, 1.9, -2.4}) {
    const BipartiteUnitary rotated{std::exp(Complex(0, alpha)) * u.matrix, u.n_s,
                                   u.n_b, u.ordering};
    CHECK(frob_distance(rotated, g).distance ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("phi_opt is unitary; distance within [0,1]; gamma bound holds") {
  Rng rng(37);
  int count = 0;
  for (int n_s : {2, 3, 4})
    for (int n_b : {1, 2, 3})
      for (int trial = 0; trial < 112 && count < 1000; ++trial, ++count) {
        const BipartiteUnitary u =
            random_bipartite(n_s, n_b, Ordering::SystemFirst, rng);
        const Matrix g = haar_unitary(n_s, rng);
        const auto report = frob_distance(u, g);
        CHECK(report.distance >= 0.0);
        CHECK(report.distance <= 1.0);
        CHECK(unitarity_residual(report.phi_opt) <= 1e-10);
        CHECK(spectral_norm(gamma(u, g).gamma) <= double(n_s) + 1e-8);
      }
}

TEST_CASE("exact-case consistency with the tensor shortcut") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix u_s = haar_unitary(2, rng);
    const Matrix u_b = haar_unitary(3, rng);
    const Matrix g = haar_unitary(2, rng);
    const double shortcut = frob_distance_exact_tensor(u_s, g);
    const double general =
        frob_distance(product_bipartite(u_s, u_b, Ordering::SystemFirst), g)
            .distance;
    CHECK(std::abs(shortcut - general) <= 1e-10);
  }
}

TEST_CASE("tensor shortcut: same gate and phase-shifted gate give zero") {
  Rng rng(43);
  const Matrix g = haar_unitary(3, rng);
  CHECK(frob_distance_exact_tensor(g, g) <= 1e-7);
  for (double phase : {0.4, 2.2}) {
    const Matrix u_s = std::exp(Complex(0, phase)) * g;
    CHECK(frob_distance_exact_tensor(u_s, g) <= 1e-7);
  }
  CHECK_THROWS_AS(frob_distance_exact_tensor(g, haar_unitary(2, rng)),
                  dimension_error);
}

TEST_CASE("ordering coherence on swapped products") {
  Rng rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = haar_unitary(2, rng);  // system factor
    const Matrix b = haar_unitary(3, rng);  // bath factor
    const Matrix g = haar_unitary(2, rng);
    const double d_sf =
        frob_distance(product_bipartite(a, b, Ordering::SystemFirst), g).distance;
    const double d_bf =
        frob_distance(product_bipartite(a, b, Ordering::BathFirst), g).distance;
    CHECK(std::abs(d_sf - d_bf) <= 1e-10);
  }
}

TEST_CASE("zero gamma falls back to distance 1 and identity phi") {
  // G = I and U = sigma_x (x) I has U_(11) + U_(22) = 0
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const BipartiteUnitary u =
      product_bipartite(swap, Matrix::Identity(2, 2), Ordering::SystemFirst);
  const auto report = frob_distance(u, Matrix::Identity(2, 2));
  CHECK(report.gamma_trace_norm == 0.0);
  CHECK(report.distance == 1.0);
  CHECK((report.phi_opt - Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("validation: non-unitary bipartite input is rejected") {
  Matrix m = Matrix::Identity(4, 4);
  m(0, 0) = 2.0;
  CHECK_THROWS_AS(BipartiteUnitary::checked(m, 2, 2, Ordering::SystemFirst),
                  not_unitary_error);
  CHECK_THROWS_AS(
      BipartiteUnitary::checked(Matrix::Identity(4, 4), 2, 3, Ordering::SystemFirst),
      dimension_error);
}

}  // TEST_SUITE
