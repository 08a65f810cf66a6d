#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "expect_error.hpp"
#include "mdrlab/entangler.hpp"
#include "oracles.hpp"

using namespace mdrlab;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

ObservablePair random_pair(std::size_t n, std::uint64_t seed) {
  return ObservablePair::make(random_hermitian(n, seed), random_hermitian(n, seed + 7919));
}

}  // namespace

TEST_CASE("ObservablePair") {
  const auto zx = ObservablePair::make(pauli::z(), pauli::x());
  // [Z, X] / 2i = Y
  CHECK(max_abs(zx.C - pauli::y()) < 1e-12);
  CHECK_ERROR_CODE(ObservablePair::make(pauli::identity(), pauli::x()), ErrorCode::Degenerate);
  Matrix bad = pauli::x();
  bad(0, 1) = 3.0;
  CHECK_ERROR_CODE(ObservablePair::make(pauli::z(), bad), ErrorCode::NotHermitian);
  CHECK_ERROR_CODE(ObservablePair::make(pauli::z(), random_hermitian(3, 1)), ErrorCode::DimensionMismatch);
}

TEST_CASE("Z/X with V = I gives the Bell state and unprimed copies") {
  const auto s = build_nonfactorable(ObservablePair::make(pauli::z(), pauli::x()));
  CHECK(max_abs(s.U - Matrix::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(s.Aprime - pauli::z()) < 1e-12);
  CHECK(max_abs(s.Bprime - pauli::x()) < 1e-12);
  const double h = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(s.psi12[0] - h) < 1e-12);
  CHECK(std::abs(s.psi12[1]) < 1e-12);
  CHECK(std::abs(s.psi12[2]) < 1e-12);
  CHECK(std::abs(s.psi12[3] - h) < 1e-12);
  const auto r = verify_transfer(s);
  CHECK(r.a < 1e-15);
  CHECK(r.b < 1e-12);
  CHECK(dual_basis_form(s) < 1e-10);
}

TEST_CASE("Z on particle 1 equals Z on particle 2 for the Bell state") {
  const double h = 1.0 / std::numbers::sqrt2;
  Vector bell(4);
  bell << h, 0.0, 0.0, h;
  const StateVector psi({2, 2}, bell);
  const auto r = transfer_residuals(psi, pauli::z(), pauli::z(), pauli::x(), pauli::x());
  CHECK(r.a == 0.0);
  CHECK(r.b == 0.0);
}

TEST_CASE("product state fails the transfer") {
  Vector v(4);
  v << 0.5, 0.5, 0.5, 0.5;
  const StateVector product({2, 2}, v);
  CHECK(transfer_residuals(product, pauli::z(), pauli::z(), pauli::x(), pauli::x()).a > 0.5);
}

TEST_CASE("congruence invariants on random inputs") {
  for (std::size_t n = 2; n <= 5; ++n) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto pair = random_pair(n, 100 * n + seed);
      const Matrix V = random_unitary(n, 5000 + seed);
      const auto s = build_nonfactorable(pair, V);
      CHECK(max_abs(s.U - s.W * s.V * s.W.transpose()) < 1e-10);
      CHECK(max_abs(s.Aprime - s.Uop * pair.A * s.Uop.adjoint()) < 1e-10);
      CHECK(max_abs(s.Bprime - s.Vop * pair.B * s.Vop.adjoint()) < 1e-10);
      CHECK(is_unitary(s.Uop));
      const auto r = verify_transfer(s);
      CHECK(r.a < 1e-9);
      CHECK(r.b < 1e-9);
      CHECK(dual_basis_form(s) < 1e-9);

      // Maximally entangled: every Schmidt coefficient is 1/sqrt N.
      for (double c : schmidt_coefficients(s.psi12)) CHECK(std::abs(c - 1.0 / std::sqrt(double(n))) < 1e-10);

      // Same spectrum on both sides.
      const auto a = hermitian_eig(pair.A).eigenvalues, ap = hermitian_eig(s.Aprime).eigenvalues;
      CHECK((a - ap).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("seeded 3 x 3 example") {
  const auto pair = ObservablePair::make(random_hermitian(3, 11), random_hermitian(3, 12));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = build_nonfactorable(pair, random_unitary(3, 13 + seed));
    const auto r = verify_transfer(s);
    CHECK(std::max(r.a, r.b) < 1e-9);
  }
}

TEST_CASE("real W with V = I keeps residuals at round-off") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Matrix a = random_hermitian(3, seed).real().cast<Complex>();
    Matrix b = random_hermitian(3, seed + 50).real().cast<Complex>();
    const auto s = build_nonfactorable(ObservablePair::make(a, b));
    CHECK(max_abs(s.W.imag()) < 1e-12);
    const auto r = verify_transfer(s);
    CHECK(std::max(r.a, r.b) < 1e-9);
  }
}

TEST_CASE("negative controls") {
  int adjoint_failures = 0, phase_failures = 0, dual_failures = 0;
  constexpr int kDraws = 60;
  for (int seed = 0; seed < kDraws; ++seed) {
    const auto pair = random_pair(3, 900 + static_cast<std::uint64_t>(seed));
    const Matrix V = random_unitary(3, 1900 + static_cast<std::uint64_t>(seed));

    const auto adjoint = build_nonfactorable(pair, V, Congruence::Adjoint);
    const auto ra = verify_transfer(adjoint);
    if (std::max(ra.a, ra.b) > 1e-3) ++adjoint_failures;
    if (dual_basis_form(adjoint) > 1e-3) ++dual_failures;

    const auto good = build_nonfactorable(pair, V);
    Eigen::Vector3cd phases(1.0, std::polar(1.0, 0.7), std::polar(1.0, -1.9));
    const auto broken = assemble_nonfactorable(pair, good.U * phases.asDiagonal(), V);
    const auto rp = verify_transfer(broken);
    if (std::max(rp.a, rp.b) > 1e-3) ++phase_failures;
  }
  CHECK(adjoint_failures >= kDraws * 95 / 100);
  CHECK(dual_failures >= kDraws * 95 / 100);
  CHECK(phase_failures == kDraws);
}

TEST_CASE("build_nonfactorable validation") {
  const auto pair = ObservablePair::make(pauli::z(), pauli::x());
  CHECK_ERROR_CODE(build_nonfactorable(pair, Matrix(2.0 * Matrix::Identity(2, 2))), ErrorCode::NotUnitary);
  CHECK_ERROR_CODE(build_nonfactorable(pair, random_unitary(3, 1)), ErrorCode::DimensionMismatch);
}

TEST_CASE("schmidt_coefficients of a product state") {
  const auto s = schmidt_coefficients(tensor(random_state({2}, 1), random_state({3}, 2)));
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] < 1e-12);
}
