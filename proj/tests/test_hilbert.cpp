#include <cmath>
#include <numbers>

#include "doctest.h"
#include "expect_error.hpp"
#include "mdrlab/hilbert.hpp"
#include "oracles.hpp"

using namespace mdrlab;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Vector ket(std::initializer_list<Complex> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (auto x : values) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("tensor of identities is the identity") {
  CHECK(max_abs(tensor(pauli::identity(), pauli::identity()) - Matrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("particle 1 is the most significant index") {
  const auto plus = StateVector::basis({2}, 0);
  const auto minus = StateVector::basis({2}, 1);
  const auto joint = tensor(plus, minus);
  CHECK(joint.dims() == Dims{2, 2});
  CHECK(std::abs(joint[1] - 1.0) == 0.0);
}

TEST_CASE("Z x X on a Bell state matches an index-loop evaluation") {
  const double h = 1.0 / std::numbers::sqrt2;
  const Vector bell = ket({h, 0.0, 0.0, h});
  const Matrix zx = tensor(pauli::z(), pauli::x());
  CHECK(max_abs(zx - oracle::kron(pauli::z(), pauli::x())) < 1e-15);
  const Vector out = zx * bell;
  const Vector expected = oracle::kron(pauli::z(), pauli::x()) * bell;
  CHECK((out - expected).norm() < 1e-15);
}

TEST_CASE("tensor is associative") {
  const Matrix a = random_unitary(2, 1), b = random_hermitian(3, 2), c = random_unitary(2, 3);
  CHECK(max_abs(tensor(tensor(a, b), c) - tensor(a, tensor(b, c))) < 1e-12);
}

TEST_CASE("hermitian_eig sorts ascending and fixes phases") {
  SUBCASE("Z") {
    const auto eig = hermitian_eig(pauli::z());
    CHECK(eig.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
    CHECK((eig.eigenvector(0) - ket({0.0, 1.0})).norm() < 1e-12);
    CHECK((eig.eigenvector(1) - ket({1.0, 0.0})).norm() < 1e-12);
  }
  SUBCASE("X") {
    const double h = 1.0 / std::numbers::sqrt2;
    const auto eig = hermitian_eig(pauli::x());
    CHECK((eig.eigenvector(0) - ket({h, -h})).norm() < 1e-12);
    CHECK((eig.eigenvector(1) - ket({h, h})).norm() < 1e-12);
  }
  SUBCASE("random 4 x 4 reconstructs") {
    const Matrix m = random_hermitian(4, 7);
    const auto eig = hermitian_eig(m);
    CHECK(max_abs(eig.reconstruct() - m) < 1e-10);
    for (Eigen::Index i = 0; i + 1 < 4; ++i) CHECK(eig.eigenvalues(i) <= eig.eigenvalues(i + 1));
    for (Eigen::Index j = 0; j < 4; ++j) {
      for (Eigen::Index i = 0; i < 4; ++i) {
        if (std::abs(eig.eigenvectors(i, j)) > 1e-9) {
          CHECK(std::abs(eig.eigenvectors(i, j).imag()) < 1e-15);
          CHECK(eig.eigenvectors(i, j).real() > 0.0);
          break;
        }
      }
    }
  }
}

TEST_CASE("hermitian_eig is bit-for-bit deterministic") {
  const Matrix m = random_hermitian(5, 21);
  const auto a = hermitian_eig(m), b = hermitian_eig(m);
  CHECK((a.eigenvalues.array() == b.eigenvalues.array()).all());
  CHECK((a.eigenvectors.array() == b.eigenvectors.array()).all());
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  Matrix m = pauli::x();
  m(0, 1) = 2.0;
  CHECK_ERROR_CODE(hermitian_eig(m), ErrorCode::NotHermitian);
}

TEST_CASE("basis_change") {
  SUBCASE("Z to Z is the identity") {
    const auto z = hermitian_eig(pauli::z());
    CHECK(max_abs(basis_change(z, z) - Matrix::Identity(2, 2)) < 1e-12);
  }
  SUBCASE("Z to X matches <alpha_mu|beta_i>") {
    const auto za = hermitian_eig(pauli::z()), xb = hermitian_eig(pauli::x());
    const Matrix w = basis_change(za, xb);
    for (Eigen::Index mu = 0; mu < 2; ++mu) {
      for (Eigen::Index i = 0; i < 2; ++i) {
        const Complex overlap = za.eigenvector(static_cast<std::size_t>(mu)).dot(xb.eigenvector(static_cast<std::size_t>(i)));
        CHECK(std::abs(w(mu, i) - overlap) < 1e-12);
        CHECK(std::abs(std::abs(w(mu, i)) - 1.0 / std::numbers::sqrt2) < 1e-12);
      }
    }
    CHECK(max_abs(w - w.transpose()) < 1e-12);
  }
  SUBCASE("random 3 x 3 pair gives a unitary") {
    const Matrix w = basis_change(hermitian_eig(random_hermitian(3, 4)), hermitian_eig(random_hermitian(3, 5)));
    CHECK(unitarity_defect(w) < 1e-10);
  }
  SUBCASE("errors") {
    CHECK_ERROR_CODE(basis_change(hermitian_eig(pauli::z()), hermitian_eig(random_hermitian(3, 1))),
                     ErrorCode::DimensionMismatch);
    CHECK_ERROR_CODE(basis_change(hermitian_eig(pauli::identity()), hermitian_eig(pauli::x())), ErrorCode::Degenerate);
  }
}

TEST_CASE("expectation and std_dev") {
  const auto plus = StateVector::basis({2}, 0);
  CHECK(expectation(plus, pauli::z()) == doctest::Approx(1.0));
  const auto psi = random_state({3}, 9);
  CHECK(expectation(psi, Matrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-12));

  const double h = 1.0 / std::numbers::sqrt2;
  const StateVector y_minus({2}, ket({h, Complex(0.0, -h)}));
  CHECK(expectation(y_minus, pauli::y()) == doctest::Approx(-1.0));
  CHECK(std_dev(y_minus, pauli::z()) == doctest::Approx(1.0));
  CHECK(std_dev(y_minus, pauli::x()) == doctest::Approx(1.0));

  CHECK(std_dev(plus, pauli::z()) == 0.0);
  const StateVector even({2}, ket({h, h}));
  CHECK(std_dev(even, pauli::z()) == doctest::Approx(1.0));

  CHECK_ERROR_CODE(expectation(plus, Matrix(Matrix::Identity(3, 3))), ErrorCode::DimensionMismatch);
  Matrix skew = pauli::x();
  skew(0, 1) = Complex(0.0, 1.0);
  CHECK_ERROR_CODE(expectation(StateVector({2}, ket({h, h})), skew), ErrorCode::NotHermitian);
}

TEST_CASE("variance identity holds for random states and operators") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix m = random_hermitian(4, s);
    const auto psi = random_state({4}, s + 100);
    const double sd = std_dev(psi, m), mean = expectation(psi, m);
    CHECK(std::abs(sd * sd + mean * mean - expectation(psi, m * m)) < 1e-10);
  }
}

TEST_CASE("state construction validates its input") {
  CHECK_ERROR_CODE(StateVector({2}, ket({1.0, 1.0})), ErrorCode::NotNormalized);
  CHECK_ERROR_CODE(StateVector({3}, ket({1.0, 0.0})), ErrorCode::DimensionMismatch);
  CHECK_ERROR_CODE(StateVector::normalized({2}, ket({0.0, 0.0})), ErrorCode::NotNormalized);
}

TEST_CASE("samplers") {
  for (std::uint64_t s = 0; s < 1000; ++s) CHECK(std::abs(random_state({2}, s).amplitudes().norm() - 1.0) < 1e-12);
  for (std::uint64_t s = 0; s < 20; ++s) CHECK(is_unitary(random_unitary(3, s)));
  CHECK(is_hermitian(random_hermitian(6, 3)));
  CHECK((random_unitary(4, 8).array() == random_unitary(4, 8).array()).all());

  double mean = 0.0;
  constexpr int kSamples = 100000;
  for (int s = 0; s < kSamples; ++s) mean += expectation(random_state({2}, static_cast<std::uint64_t>(s)), pauli::z());
  CHECK(std::abs(mean / kSamples) < 0.01);
}

TEST_CASE("embed places operators by site") {
  const Dims dims{2, 3, 2};
  const Matrix h = random_hermitian(3, 2);
  const Matrix full = embed(h, 1, dims);
  CHECK(max_abs(full - oracle::kron(oracle::kron(pauli::identity(), h), pauli::identity())) < 1e-14);

  const std::array<std::size_t, 2> reversed{2, 0};
  const Matrix zx = embed(tensor(pauli::z(), pauli::x()), reversed, dims);
  const Matrix expected = oracle::kron(oracle::kron(pauli::x(), Matrix::Identity(3, 3)), pauli::z());
  CHECK(max_abs(zx - expected) < 1e-14);
}
