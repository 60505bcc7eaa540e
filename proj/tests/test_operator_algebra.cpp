#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "choigram/operator_algebra.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace choigram;
using choigram::testing::TestRng;
using choigram::testing::max_abs_diff;
using choigram::testing::random_hermitian;
using choigram::testing::random_matrix;
using choigram::testing::random_unitary;

namespace {

ComplexMatrix swap_matrix() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 2) = 1;
  m(2, 1) = 1;
  m(3, 3) = 1;
  return m;
}

}  // namespace

TEST_CASE("vec follows the column-stacking convention") {
  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(3, 0), Complex(2, 0), Complex(4, 0);
  const ComplexVector v = vec(m);
  CHECK(v(0) == Complex(1, 0));  // column 0 first
  CHECK(v(1) == Complex(2, 0));
  CHECK(v(2) == Complex(3, 0));
  CHECK(v(3) == Complex(4, 0));
  CHECK(max_abs_diff(unvec(v, 2, 2), m) == 0.0);
}

TEST_CASE("vec(A X B) = (B^T kron A) vec(X)") {
  TestRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 3, 3);
    const ComplexMatrix b = random_matrix(rng, 3, 3);
    const ComplexMatrix x = random_matrix(rng, 3, 3);
    const ComplexVector lhs = vec(a * x * b);
    const ComplexVector rhs = kron(b.transpose(), a) * vec(x);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("kron of identities") {
  CHECK(max_abs_diff(kron(pauli_i(), pauli_i()), ComplexMatrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("kron of sigma_z with itself is diag(1,-1,-1,1)") {
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1;
  expected(1, 1) = -1;
  expected(2, 2) = -1;
  expected(3, 3) = 1;
  CHECK(max_abs_diff(kron(pauli_z(), pauli_z()), expected) == 0.0);
}

TEST_CASE("kron of sigma_x with itself is the anti-diagonal") {
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 3) = 1;
  expected(1, 2) = 1;
  expected(2, 1) = 1;
  expected(3, 0) = 1;
  CHECK(max_abs_diff(kron(pauli_x(), pauli_x()), expected) == 0.0);
}

TEST_CASE("kron is associative and bilinear") {
  TestRng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 2, 2);
    const ComplexMatrix b = random_matrix(rng, 3, 2);
    const ComplexMatrix c = random_matrix(rng, 2, 3);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-13);

    const ComplexMatrix d = random_matrix(rng, 2, 2);
    const Complex alpha = rng.cnormal();
    CHECK(max_abs_diff(kron(a + alpha * d, b), kron(a, b) + alpha * kron(d, b)) < 1e-13);
    CHECK(max_abs_diff(kron(b, a + alpha * d), kron(b, a) + alpha * kron(b, d)) < 1e-13);
  }
}

TEST_CASE("hermitian eigenvalues of diagonal input come back sorted") {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 3;
  m(1, 1) = 1;
  m(2, 2) = 2;
  const auto evs = hermitian_eigenvalues(HermitianMatrix(m));
  REQUIRE(evs.size() == 3);
  CHECK(evs[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(evs[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(evs[2] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("sigma_x spectrum") {
  const auto evs = hermitian_eigenvalues(HermitianMatrix(pauli_x()));
  CHECK(evs[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(evs[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("SWAP spectrum is {-1, 1, 1, 1}") {
  const auto evs = hermitian_eigenvalues(HermitianMatrix(swap_matrix()));
  REQUIRE(evs.size() == 4);
  CHECK(evs[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(evs[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(evs[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(evs[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigenvalues are invariant under unitary conjugation") {
  TestRng rng(23);
  for (Eigen::Index dim : {4, 6}) {
    const ComplexMatrix a = random_hermitian(rng, dim);
    const ComplexMatrix u = random_unitary(rng, dim);
    const auto base = hermitian_eigenvalues(HermitianMatrix(a));
    const auto rotated =
        hermitian_eigenvalues(HermitianMatrix((u * a * u.adjoint()).eval(), 1e-11));
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(std::abs(base[i] - rotated[i]) < 1e-10);
    }
  }
}

TEST_CASE("HermitianMatrix symmetrizes and records the defect") {
  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(0.5, 1e-14), Complex(0.5, -1e-14 + 2e-14), Complex(2, 0);
  HermitianMatrix h(m);
  CHECK(h.defect() > 0.0);
  CHECK(h.defect() < 1e-12);
  CHECK(max_abs_diff(h.matrix(), h.matrix().adjoint()) == 0.0);
}

TEST_CASE("HermitianMatrix rejects a genuinely non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 1, 2, 3, 4;
  CHECK_THROWS_AS(HermitianMatrix{m}, std::invalid_argument);
}

TEST_CASE("HermitianMatrix rejects non-finite entries") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = Complex(std::nan(""), 0);
  CHECK_THROWS_AS(HermitianMatrix{m}, std::invalid_argument);
}

TEST_CASE("trace norm basics") {
  CHECK(trace_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
  CHECK(trace_norm(pauli_z()) == doctest::Approx(2.0).epsilon(1e-14));
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 0.3;
  m(1, 1) = -0.3;
  CHECK(trace_norm(m) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("trace norm satisfies the triangle inequality") {
  TestRng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const ComplexMatrix a = random_hermitian(rng, 4);
    const ComplexMatrix b = random_hermitian(rng, 4);
    CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-12);
  }
}

TEST_CASE("invert on easy inputs") {
  CHECK(max_abs_diff(invert(ComplexMatrix::Identity(4, 4)),
                     ComplexMatrix::Identity(4, 4)) < 1e-14);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 4;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 0.5;
  expected(1, 1) = 0.25;
  CHECK(max_abs_diff(invert(d), expected) < 1e-15);
}

TEST_CASE("invert refuses a condition estimate past the limit") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = 1e-300;
  try {
    invert(d, 1e12);
    FAIL("expected SingularMapError");
  } catch (const SingularMapError& e) {
    CHECK(e.condition_estimate() > 1e12);
  }
}

TEST_CASE("invert residual stays within the condition budget") {
  TestRng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a =
        random_matrix(rng, 4, 4) + 2.0 * ComplexMatrix::Identity(4, 4);
    const double cond = condition_estimate(a);
    const ComplexMatrix residual = a * invert(a) - ComplexMatrix::Identity(4, 4);
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-10 * cond);
  }
}

TEST_CASE("matrix_unit places a single one") {
  const ComplexMatrix e = matrix_unit(3, 1, 2);
  CHECK(e(1, 2) == Complex(1, 0));
  CHECK(e.cwiseAbs().sum() == 1.0);
  CHECK_THROWS_AS(matrix_unit(2, 2, 0), std::invalid_argument);
}
