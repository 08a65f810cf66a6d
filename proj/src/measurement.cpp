#include "mdrlab/measurement.hpp"

#include <array>
#include <cmath>
#include <string>

#include "mdrlab/error.hpp"

namespace mdrlab {

namespace {

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

struct JointState {
  Vector amplitudes;
  Eigen::Index systemDim;
  Eigen::Index meterDim;
};

JointState joint(const StateVector& system, const MeterModel& meter) {
  const auto ds = static_cast<Eigen::Index>(system.dim());
  const auto dm = static_cast<Eigen::Index>(meter.meterState.dim());
  if (meter.coupling.rows() != ds * dm) {
    throw Error(ErrorCode::DimensionMismatch, "meter coupling does not act on system x meter");
  }
  return {tensor(system, meter.meterState).amplitudes(), ds, dm};
}

// <v| X^2 |v> for Hermitian X, as ||X v||^2 so it cannot go negative.
double mean_square(const Matrix& x, const Vector& v) { return (x * v).squaredNorm(); }

}  // namespace

MeterModel MeterModel::make(StateVector meterState, Matrix coupling, Matrix readout) {
  const auto dm = static_cast<Eigen::Index>(meterState.dim());
  if (readout.rows() != dm || readout.cols() != dm) {
    throw Error(ErrorCode::DimensionMismatch, "readout must act on the meter space");
  }
  if (coupling.rows() != coupling.cols() || coupling.rows() % dm != 0) {
    throw Error(ErrorCode::DimensionMismatch, "coupling must act on system x meter");
  }
  if (!is_unitary(coupling)) throw Error(ErrorCode::NotUnitary, "meter coupling is not unitary");
  if (!is_hermitian(readout)) throw Error(ErrorCode::NotHermitian, "meter readout is not Hermitian");
  return {std::move(meterState), std::move(coupling), std::move(readout)};
}

ProjectionBasis::ProjectionBasis(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
  const std::size_t n = vectors_.size();
  if (n == 0) throw Error(ErrorCode::IncompleteBasis, "empty projection basis");
  for (const auto& v : vectors_) {
    if (static_cast<std::size_t>(v.size()) != n) {
      throw Error(ErrorCode::IncompleteBasis, "basis vector count must equal the dimension");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex overlap = vectors_[i].dot(vectors_[j]);
      if (std::abs(overlap - (i == j ? 1.0 : 0.0)) > tol::kAlgebraic) {
        throw Error(ErrorCode::IncompleteBasis, "projection basis is not orthonormal");
      }
    }
  }
}

ProjectionBasis ProjectionBasis::from_unitary(const Matrix& u) {
  std::vector<Vector> cols;
  for (Eigen::Index j = 0; j < u.cols(); ++j) cols.emplace_back(u.col(j));
  return ProjectionBasis(std::move(cols));
}

ProjectionBasis ProjectionBasis::eigenbasis(const Matrix& hermitian) {
  return from_unitary(hermitian_eig(hermitian).eigenvectors);
}

ProjectionBasis ProjectionBasis::qubit(double polar, double azimuth) {
  const double c = std::cos(polar / 2.0), s = std::sin(polar / 2.0);
  const Complex phase = std::polar(1.0, azimuth);
  Vector p(2), q(2);
  p << c, phase * s;
  q << -std::conj(phase) * s, c;
  return ProjectionBasis({p, q});
}

Matrix ProjectionBasis::as_matrix() const {
  const auto n = static_cast<Eigen::Index>(vectors_.size());
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) = vectors_[static_cast<std::size_t>(j)];
  return m;
}

double precision_sq(const StateVector& system, const Matrix& A, const MeterModel& meter) {
  const auto [v, ds, dm] = joint(system, meter);
  if (A.rows() != ds) throw Error(ErrorCode::DimensionMismatch, "A does not act on the system");
  const Matrix& U = meter.coupling;
  const Matrix measured = U.adjoint() * tensor(identity(ds), meter.readout) * U;
  return mean_square(measured - tensor(A, identity(dm)), v);
}

double disturbance_sq(const StateVector& system, const Matrix& B, const MeterModel& meter) {
  const auto [v, ds, dm] = joint(system, meter);
  if (B.rows() != ds) throw Error(ErrorCode::DimensionMismatch, "B does not act on the system");
  const Matrix& U = meter.coupling;
  const Matrix bare = tensor(B, identity(dm));
  return mean_square(U.adjoint() * bare * U - bare, v);
}

MeasurementContext measured_spreads(const StateVector& system, const Matrix& B, const MeterModel& meter) {
  const auto [v, ds, dm] = joint(system, meter);
  const Matrix& U = meter.coupling;
  const StateVector joint_state({static_cast<std::size_t>(ds), static_cast<std::size_t>(dm)}, v);
  const Matrix measured_a = U.adjoint() * tensor(identity(ds), meter.readout) * U;
  const Matrix measured_b = U.adjoint() * tensor(B, identity(dm)) * U;
  return {std_dev(joint_state, measured_a), std_dev(joint_state, measured_b)};
}

EnsembleContext ensemble_context(const StateVector& state, const Matrix& A, const Matrix& B) {
  const Matrix C = (A * B - B * A) / Complex(0.0, 2.0);
  return EnsembleContext::make(std_dev(state, A), std_dev(state, B), std::abs(expectation(state, C)));
}

ProjectedEnsemble project_particle2(const StateVector& psi12, const ProjectionBasis& basis) {
  const Dims& dims = psi12.dims();
  if (dims.size() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a bipartite state");
  if (basis.dim() != dims[1]) throw Error(ErrorCode::IncompleteBasis, "basis does not span particle 2");
  const auto n1 = static_cast<Eigen::Index>(dims[0]);
  const auto n2 = static_cast<Eigen::Index>(dims[1]);
  Matrix coeffs(n1, n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n2; ++j) coeffs(i, j) = psi12.amplitudes()(i * n2 + j);
  }
  ProjectedEnsemble out;
  for (const auto& p : basis.vectors()) {
    const Vector branch = coeffs * p.conjugate();
    const double weight = branch.squaredNorm();
    if (weight < kBranchWeightFloor) {
      out.entries.push_back({weight, std::nullopt});
    } else {
      out.entries.push_back({weight, StateVector::normalized({dims[0]}, branch)});
    }
  }
  return out;
}

WeightedErrors direct_error_sums(const TripartiteScenario& scenario) {
  const Dims dims = scenario.dims();
  const NonfactorableState& src = scenario.source;
  const Vector& v = scenario.psi123.amplitudes();
  const Matrix da = embed(src.pair.A, kMeterSite, dims) - embed(src.Aprime, kPartnerSite, dims);
  const Matrix db = embed(src.pair.B, kSystemSite, dims) - embed(src.Bprime, kPartnerSite, dims);
  return {mean_square(da, v), mean_square(db, v)};
}

WeightedErrors branch_error_sums(const TripartiteScenario& scenario, const ProjectionBasis& basis) {
  const NonfactorableState& src = scenario.source;
  const MeterModel meter{scenario.meterState, scenario.interaction, src.pair.A};
  const ProjectedEnsemble ensemble = project_particle2(src.psi12, basis);

  WeightedErrors branches{0.0, 0.0};
  for (const auto& entry : ensemble.entries) {
    if (!entry.state) continue;
    branches.precision += entry.weight * precision_sq(*entry.state, src.pair.A, meter);
    branches.disturbance += entry.weight * disturbance_sq(*entry.state, src.pair.B, meter);
  }
  return branches;
}

WeightedErrors weighted_error_sums(const TripartiteScenario& scenario, const ProjectionBasis& basis) {
  const WeightedErrors branches = branch_error_sums(scenario, basis);
  const WeightedErrors direct = direct_error_sums(scenario);
  const double gap = std::max(std::abs(branches.precision - direct.precision),
                              std::abs(branches.disturbance - direct.disturbance));
  if (gap > 1e-9) {
    throw Error(ErrorCode::IdentityViolation,
                "per-branch and direct weighted error sums differ by " + std::to_string(gap));
  }
  return direct;
}

Matrix cnot(std::size_t control, std::size_t target, const Dims& dims) {
  if (control >= dims.size() || target >= dims.size() || control == target) {
    throw Error(ErrorCode::InvalidArgument, "cnot needs two distinct sites inside dims");
  }
  if (dims[control] != 2 || dims[target] != 2) throw Error(ErrorCode::NotQubit, "cnot sites must be qubits");
  const std::size_t n = product(dims);
  // Place value of each site under the site-0-most-significant convention.
  std::size_t control_stride = 1, target_stride = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    if (k == control) break;
    control_stride *= dims[k];
  }
  for (std::size_t k = dims.size(); k-- > 0;) {
    if (k == target) break;
    target_stride *= dims[k];
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t row = col;
    if ((col / control_stride) % 2 == 1) row ^= target_stride;
    out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  }
  return out;
}

}  // namespace mdrlab
