#pragma once

// Maximally entangled bipartite states that transfer the action of an
// observable pair (A, B) on particle 1 to unitarily rotated copies
// (A', B') on particle 2:
//
//   (A x I)|psi12> = (I x A')|psi12>,   (B x I)|psi12> = (I x B')|psi12>.

#include <vector>

#include "mdrlab/hilbert.hpp"

namespace mdrlab {

struct ObservablePair {
  Matrix A;
  Matrix B;
  Matrix C;  // (AB - BA) / 2i

  /// Throws NotHermitian, DimensionMismatch, or Degenerate (either spectrum
  /// has a repeated eigenvalue).
  static ObservablePair make(Matrix A, Matrix B);
};

/// How U is tied to V. `Adjoint` (U = W V W^dagger) is the wrong relation and
/// exists only to drive negative controls.
enum class Congruence { Transpose, Adjoint };

struct NonfactorableState {
  StateVector psi12;
  ObservablePair pair;
  SpectralDecomposition eigA;
  SpectralDecomposition eigB;
  Matrix W;         // |beta_i> = sum_mu |alpha_mu> W(mu, i)
  Matrix U;         // in the A-eigenbasis: |alpha'_i> = sum_mu |alpha_mu> U(mu, i)
  Matrix V;         // in the B-eigenbasis: |beta'_i> = sum_j |beta_j> V(j, i)
  Matrix Uop;       // U as an operator in the computational basis
  Matrix Vop;       // V as an operator in the computational basis
  Matrix Aprime;    // Uop A Uop^dagger
  Matrix Bprime;    // Vop B Vop^dagger

  std::size_t dim() const noexcept { return static_cast<std::size_t>(pair.A.rows()); }
};

/// psi12 = (1/sqrt N) sum_i |alpha_i>|alpha'_i> with U = W V W^T.
/// `V` is expressed in the B-eigenbasis. Throws NotUnitary, DimensionMismatch.
NonfactorableState build_nonfactorable(const ObservablePair& pair, const Matrix& V,
                                       Congruence congruence = Congruence::Transpose);
NonfactorableState build_nonfactorable(const ObservablePair& pair);

/// Same construction with a caller-chosen U (A-eigenbasis) in place of the
/// congruence relation. Used to show that the relation is necessary.
NonfactorableState assemble_nonfactorable(const ObservablePair& pair, const Matrix& U, const Matrix& V);

struct TransferResiduals {
  double a;  // ||(A x I - I x A')|psi12>||
  double b;  // ||(B x I - I x B')|psi12>||
};

TransferResiduals verify_transfer(const NonfactorableState& state);
TransferResiduals transfer_residuals(const StateVector& psi12, const Matrix& A, const Matrix& Aprime,
                                     const Matrix& B, const Matrix& Bprime);

/// ||psi12 - (1/sqrt N) sum_i |beta_i>|beta'_i>|| with |beta'_i> = Vop|beta_i>.
double dual_basis_form(const NonfactorableState& state);

/// Schmidt coefficients of a bipartite state with dims (N, M), descending.
std::vector<double> schmidt_coefficients(const StateVector& psi12);

}  // namespace mdrlab
