#pragma once

// Operator-formalism precision and disturbance of a meter-based measurement,
// projected ensembles of particle 1, and the weighted-sum identities that turn
// per-branch errors into tripartite expectation values.

#include <optional>
#include <utility>
#include <vector>

#include "mdrlab/hilbert.hpp"
#include "mdrlab/mdr_catalog.hpp"
#include "mdrlab/scenario.hpp"

namespace mdrlab {

/// Meter |phi>, coupling U on system x meter, readout M on the meter.
struct MeterModel {
  StateVector meterState;
  Matrix coupling;
  Matrix readout;

  /// Validates unitarity of the coupling and that all dimensions agree.
  static MeterModel make(StateVector meterState, Matrix coupling, Matrix readout);
};

/// Complete orthonormal basis of particle 2's space.
class ProjectionBasis {
 public:
  /// Throws IncompleteBasis unless the vectors are orthonormal within 1e-10
  /// and their count equals the dimension.
  explicit ProjectionBasis(std::vector<Vector> vectors);
  /// Columns of a unitary.
  static ProjectionBasis from_unitary(const Matrix& u);
  /// Eigenbasis of a Hermitian operator, ascending eigenvalues.
  static ProjectionBasis eigenbasis(const Matrix& hermitian);
  /// Qubit basis {p, p_perp} with p at Bloch angles (polar, azimuth).
  static ProjectionBasis qubit(double polar, double azimuth);

  const std::vector<Vector>& vectors() const noexcept { return vectors_; }
  std::size_t dim() const noexcept { return vectors_.size(); }
  Matrix as_matrix() const;

 private:
  std::vector<Vector> vectors_;
};

inline constexpr double kBranchWeightFloor = 1e-14;

struct ProjectedBranch {
  double weight;
  /// Empty for branches below kBranchWeightFloor; those are skipped in sums.
  std::optional<StateVector> state;
};

struct ProjectedEnsemble {
  std::vector<ProjectedBranch> entries;
};

/// eps(A)^2 = <phi|<psi| (U^dagger (I x M) U - A x I)^2 |psi>|phi>.
double precision_sq(const StateVector& system, const Matrix& A, const MeterModel& meter);
/// eta(B)^2 = <phi|<psi| (U^dagger (B x I) U - B x I)^2 |psi>|phi>.
double disturbance_sq(const StateVector& system, const Matrix& B, const MeterModel& meter);
/// (Delta calA, Delta calB) of the measured observables on |psi>|phi>.
MeasurementContext measured_spreads(const StateVector& system, const Matrix& B, const MeterModel& meter);

/// Ensemble data (Delta A, Delta B, |<C>|) of A, B on `state`.
EnsembleContext ensemble_context(const StateVector& state, const Matrix& A, const Matrix& B);

/// Projects particle 2 of psi12 (dims (N, N)) onto each basis vector.
ProjectedEnsemble project_particle2(const StateVector& psi12, const ProjectionBasis& basis);

struct WeightedErrors {
  double precision;    // sum_i w_i eps_i(A)^2
  double disturbance;  // sum_i w_i eta_i(B)^2
};

/// Both weighted sums, computed per branch with particle 3 as the meter
/// (readout M = A) and directly as <(A_3 - A'_2)^2>, <(B_1 - B'_2)^2> on psi123.
/// Throws IdentityViolation if the routes differ by more than 1e-9.
WeightedErrors weighted_error_sums(const TripartiteScenario& scenario, const ProjectionBasis& basis);
/// Route (a) alone.
WeightedErrors branch_error_sums(const TripartiteScenario& scenario, const ProjectionBasis& basis);
/// Route (b) alone.
WeightedErrors direct_error_sums(const TripartiteScenario& scenario);

/// CNOT between two qubit sites of `dims` (control flips target on |1> = |->).
/// Throws NotQubit.
Matrix cnot(std::size_t control, std::size_t target, const Dims& dims);

}  // namespace mdrlab
