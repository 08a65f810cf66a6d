#include <cmath>
#include <numbers>

#include "doctest.h"
#include "expect_error.hpp"
#include "mdrlab/measurement.hpp"
#include "oracles.hpp"

using namespace mdrlab;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix cnot_literal() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(2, 3) = u(3, 2) = 1.0;
  return u;
}

Matrix swap_literal() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = u(1, 2) = u(2, 1) = u(3, 3) = 1.0;
  return u;
}

StateVector y_eigenstate() {
  const double h = 1.0 / std::numbers::sqrt2;
  Vector v(2);
  v << h, Complex(0.0, -h);
  return StateVector({2}, v);
}

// <(U^dagger (I x M) U - A x I)^2> on |psi>|phi> from explicit Kronecker loops.
double precision_oracle(const Vector& psi, const Vector& phi, const Matrix& A, const Matrix& U, const Matrix& M) {
  const Matrix i_s = Matrix::Identity(A.rows(), A.rows()), i_m = Matrix::Identity(M.rows(), M.rows());
  const Matrix diff = U.adjoint() * oracle::kron(i_s, M) * U - oracle::kron(A, i_m);
  const Vector v = oracle::kron(psi, phi);
  return v.dot(diff * diff * v).real();
}

double disturbance_oracle(const Vector& psi, const Vector& phi, const Matrix& B, const Matrix& U) {
  const Matrix i_m = Matrix::Identity(phi.size(), phi.size());
  const Matrix bare = oracle::kron(B, i_m);
  const Matrix diff = U.adjoint() * bare * U - bare;
  const Vector v = oracle::kron(psi, phi);
  return v.dot(diff * diff * v).real();
}

TripartiteScenario random_scenario(std::size_t n, std::uint64_t seed) {
  const auto pair = ObservablePair::make(random_hermitian(n, seed), random_hermitian(n, seed + 1));
  return make_scenario(build_nonfactorable(pair, random_unitary(n, seed + 2)), random_state({n}, seed + 3),
                       random_unitary(n * n, seed + 4));
}

}  // namespace

TEST_CASE("precision with a CNOT meter") {
  const auto meter0 = MeterModel::make(qubit_meter_state(0.0), cnot(0, 1, {2, 2}), pauli::z());
  CHECK(precision_sq(y_eigenstate(), pauli::z(), meter0) < 1e-15);

  const auto meter45 = MeterModel::make(qubit_meter_state(kPi / 4.0), cnot(0, 1, {2, 2}), pauli::z());
  const double expected = precision_oracle(y_eigenstate().amplitudes(), qubit_meter_state(kPi / 4.0).amplitudes(),
                                           pauli::z(), cnot_literal(), pauli::z());
  CHECK(precision_sq(y_eigenstate(), pauli::z(), meter45) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(2.0));
}

TEST_CASE("precision with a SWAP coupling and readout A") {
  const auto phi = random_state({2}, 4);
  const auto psi = random_state({2}, 5);
  const Matrix A = random_hermitian(2, 6);
  const auto meter = MeterModel::make(phi, swap_literal(), A);
  CHECK(precision_sq(psi, A, meter) ==
        doctest::Approx(precision_oracle(psi.amplitudes(), phi.amplitudes(), A, swap_literal(), A)).epsilon(1e-12));
}

TEST_CASE("disturbance") {
  const auto psi = random_state({3}, 2);
  const auto trivial = MeterModel::make(random_state({3}, 3), Matrix::Identity(9, 9), random_hermitian(3, 4));
  CHECK(disturbance_sq(psi, random_hermitian(3, 5), trivial) < 1e-14);

  const auto meter0 = MeterModel::make(qubit_meter_state(0.0), cnot(0, 1, {2, 2}), pauli::z());
  CHECK(disturbance_sq(y_eigenstate(), pauli::x(), meter0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(disturbance_oracle(y_eigenstate().amplitudes(), qubit_meter_state(0.0).amplitudes(), pauli::x(),
                           cnot_literal()) == doctest::Approx(2.0));

  const auto meter45 = MeterModel::make(qubit_meter_state(kPi / 4.0), cnot(0, 1, {2, 2}), pauli::z());
  CHECK(disturbance_sq(y_eigenstate(), pauli::x(), meter45) < 1e-14);
}

TEST_CASE("meter validation") {
  CHECK_ERROR_CODE(MeterModel::make(qubit_meter_state(0.0), Matrix(2.0 * Matrix::Identity(4, 4)), pauli::z()),
                   ErrorCode::NotUnitary);
  CHECK_ERROR_CODE(MeterModel::make(qubit_meter_state(0.0), Matrix::Identity(4, 4), random_hermitian(3, 1)),
                   ErrorCode::DimensionMismatch);
  CHECK_ERROR_CODE(precision_sq(random_state({3}, 1), random_hermitian(3, 1),
                                MeterModel::make(qubit_meter_state(0.0), cnot(0, 1, {2, 2}), pauli::z())),
                   ErrorCode::DimensionMismatch);
}

TEST_CASE("projection bases") {
  const auto bell = reference_scenario(0.0).source.psi12;
  SUBCASE("sigma_y basis on the Bell state") {
    const auto e = project_particle2(bell, ProjectionBasis::eigenbasis(pauli::y()));
    REQUIRE(e.entries.size() == 2);
    for (const auto& b : e.entries) CHECK(b.weight == doctest::Approx(0.5));
    // Particle 1 is left in conj(p): the -1 eigenvector of sigma_y leaves (|+> + i|->)/sqrt 2.
    CHECK(expectation(*e.entries[0].state, pauli::y()) == doctest::Approx(1.0));
    CHECK(expectation(*e.entries[1].state, pauli::y()) == doctest::Approx(-1.0));
    CHECK(std_dev(*e.entries[0].state, pauli::z()) == doctest::Approx(1.0));
    CHECK(std_dev(*e.entries[0].state, pauli::x()) == doctest::Approx(1.0));
  }
  SUBCASE("Z basis gives Schmidt branches") {
    const auto e = project_particle2(bell, ProjectionBasis::eigenbasis(pauli::z()));
    CHECK(e.entries[0].weight == doctest::Approx(0.5));
    CHECK(std::abs(std::abs((*e.entries[0].state)[1]) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs((*e.entries[1].state)[0]) - 1.0) < 1e-12);
  }
  SUBCASE("qutrit weights sum to one") {
    const auto s = random_scenario(3, 40);
    const auto e = project_particle2(s.source.psi12, ProjectionBasis::from_unitary(random_unitary(3, 41)));
    double total = 0.0;
    for (const auto& b : e.entries) total += b.weight;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  SUBCASE("zero-weight branches are flagged") {
    Vector v(4);
    v << 1.0, 0.0, 0.0, 0.0;
    const auto e = project_particle2(StateVector({2, 2}, v), ProjectionBasis::eigenbasis(pauli::z()));
    CHECK(e.entries[0].state.has_value() == false);
    CHECK(e.entries[1].state.has_value());
  }
  SUBCASE("basis validation") {
    Vector p(2), q(2);
    p << 1.0, 0.0;
    q << 1.0, 0.0;
    CHECK_ERROR_CODE(ProjectionBasis({p, q}), ErrorCode::IncompleteBasis);
    CHECK_ERROR_CODE(ProjectionBasis({p}), ErrorCode::IncompleteBasis);
    CHECK_ERROR_CODE(project_particle2(bell, ProjectionBasis::from_unitary(random_unitary(3, 1))),
                     ErrorCode::IncompleteBasis);
  }
}

TEST_CASE("cnot") {
  const Matrix c = cnot(0, 2, {2, 2, 2});
  CHECK((c * c - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(is_unitary(c));
  // Permutation oracle: flip the last bit when the first bit is set.
  for (std::size_t col = 0; col < 8; ++col) {
    const std::size_t row = (col & 4) ? (col ^ 1) : col;
    CHECK(c(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) == Complex(1.0));
  }
  CHECK((cnot(0, 1, {2, 2}) - cnot_literal()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_ERROR_CODE(cnot(0, 1, {2, 3}), ErrorCode::NotQubit);
  CHECK_ERROR_CODE(cnot(0, 0, {2, 2}), ErrorCode::InvalidArgument);
}

TEST_CASE("CNOT(1 -> 3) reproduces the reference tripartite state") {
  const double t = 0.37;
  const auto s = reference_scenario(t);
  const double h = 1.0 / std::numbers::sqrt2;
  // (|++>(c|+> + s|->) + |-->(s|+> + c|->)) / sqrt 2
  Vector expected = Vector::Zero(8);
  expected(0) = h * std::cos(t);
  expected(1) = h * std::sin(t);
  expected(6) = h * std::sin(t);
  expected(7) = h * std::cos(t);
  CHECK((s.psi123.amplitudes() - expected).norm() < 1e-12);
}

TEST_CASE("two-route weighted sums") {
  SUBCASE("reference scenario in the sigma_y basis") {
    for (double t : {0.0, 0.3, kPi / 8.0, 1.1}) {
      const auto s = reference_scenario(t);
      const auto sums = weighted_error_sums(s, ProjectionBasis::eigenbasis(pauli::y()));
      const auto direct = direct_error_sums(s);
      CHECK(std::abs(sums.precision - direct.precision) < 1e-10);
      // CNOT meter: eps^2 = 2(1 - cos 2t), eta^2 = 2(1 - sin 2t).
      CHECK(sums.precision == doctest::Approx(2.0 * (1.0 - std::cos(2.0 * t))).epsilon(1e-10));
      CHECK(sums.disturbance == doctest::Approx(2.0 * (1.0 - std::sin(2.0 * t))).epsilon(1e-10));
    }
  }
  SUBCASE("uncoupled meter") {
    const auto pair = ObservablePair::make(pauli::z(), pauli::x());
    const auto s = make_scenario(build_nonfactorable(pair), random_state({2}, 3), Matrix::Identity(4, 4));
    const auto sums = weighted_error_sums(s, ProjectionBasis::qubit(0.4, 2.0));
    const auto v = s.psi123.amplitudes();
    const Matrix da = oracle::kron(oracle::kron(pauli::identity(), pauli::identity()), pauli::z()) -
                      oracle::kron(oracle::kron(pauli::identity(), pauli::z()), pauli::identity());
    CHECK(sums.precision == doctest::Approx(v.dot(da * da * v).real()).epsilon(1e-12));
  }
  SUBCASE("random qubit and qutrit instances, any basis") {
    for (std::size_t n : {2u, 3u}) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto s = random_scenario(n, 10 * seed + n);
        const auto first = weighted_error_sums(s, ProjectionBasis::from_unitary(random_unitary(n, seed)));
        const auto second = weighted_error_sums(s, ProjectionBasis::from_unitary(random_unitary(n, seed + 99)));
        CHECK(std::abs(first.precision - second.precision) < 1e-10);
        CHECK(std::abs(first.disturbance - second.disturbance) < 1e-10);
      }
    }
  }
}

TEST_CASE("projected errors stay inside the surviving allowed regions") {
  const auto pair = ObservablePair::make(pauli::z(), pauli::x());
  int he_violations = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto system = random_state({2}, seed);
    const Matrix coupling = seed % 2 == 0 ? random_unitary(4, seed + 1000) : cnot(0, 1, {2, 2});
    const auto meter = MeterModel::make(random_state({2}, seed + 2000), coupling, pauli::z());
    const ErrorPoint p{std::sqrt(precision_sq(system, pair.A, meter)), std::sqrt(disturbance_sq(system, pair.B, meter))};
    const auto ctx = ensemble_context(system, pair.A, pair.B);
    const auto mctx = measured_spreads(system, pair.B, meter);
    for (auto mdr : {MdrId::Oz, MdrId::Ha, MdrId::We, MdrId::B1, MdrId::B2}) {
      CHECK_MESSAGE(mdr_margin(mdr, p, ctx, mctx) >= -1e-9, to_string(mdr), " seed ", seed);
    }
    if (!satisfies(MdrId::He, p, ctx)) ++he_violations;
  }
  // He is not a valid relation; some draws must break it.
  CHECK(he_violations > 0);
}
