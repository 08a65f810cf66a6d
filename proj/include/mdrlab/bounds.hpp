#pragma once

// Correlation bounds implied by each MDR on tripartite states, plus the
// three-qubit CHSH assembly and the checks that surround them.

#include <array>
#include <cstdint>
#include <vector>

#include "mdrlab/hilbert.hpp"
#include "mdrlab/mdr_catalog.hpp"
#include "mdrlab/measurement.hpp"
#include "mdrlab/scenario.hpp"

namespace mdrlab {

/// Largest particle dimension gamma_q will search.
inline constexpr std::size_t kMaxSearchDim = 8;

struct SearchBudget {
  std::size_t grid = 64;     // qubit grid is grid x grid over (polar, azimuth)
  int refineStarts = 4;      // best grid points handed to the simplex refinement
  int restarts = 6;          // random starts for N > 2
  std::uint64_t seed = 1;
  double sizeTolerance = 1e-7;   // simplex size; the objective is quadratic at the optimum
  int maxIterations = 4000;
};

struct BranchValue {
  double weight;
  double f;  // f_q of the projected branch; 0 for skipped branches
};

struct GammaResult {
  double value = 0.0;
  ProjectionBasis argmaxBasis{{Vector::Unit(1, 0)}};
  std::vector<BranchValue> perBranch;
  /// True for qubits: global grid search plus refinement. False means the
  /// value is a best-effort lower bound from local searches.
  bool gridCertified = false;
  double gridSpacing = 0.0;
  /// Largest observed slope between neighbouring grid points.
  double lipschitzEstimate = 0.0;
  /// Best grid value + lipschitzEstimate * gridSpacing; an estimate of how far
  /// above the grid the true maximum could sit.
  double upperEstimate = 0.0;
};

/// sum_i |<p_i|psi12>|^2 f_q(psi_1^(i)) for one basis.
double basis_objective(MdrId mdr, const StateVector& psi12, const Matrix& A, const Matrix& B,
                       const ProjectionBasis& basis, std::vector<BranchValue>* branches = nullptr);

/// Maximizes basis_objective over projection bases of particle 2.
/// Throws DimensionTooLarge for N > kMaxSearchDim, OutOfDomain for B2 beyond qubits.
GammaResult gamma_search(MdrId mdr, const StateVector& psi12, const Matrix& A, const Matrix& B,
                         const SearchBudget& budget = {});
GammaResult gamma_q(MdrId mdr, const NonfactorableState& source, const SearchBudget& budget = {});

struct BoundReport {
  double lhs;  // E(A'_2, A_3) + E(B'_2, B_1)
  double rhs;  // (<A'_2^2> + <A_3^2> + <B'_2^2> + <B_1^2> - gamma_q) / 2
  MdrId mdr;
  double margin;  // rhs - lhs
};

/// <X_i Y_j> on a multipartite state (sites i != j, 0-based).
double correlation(const StateVector& state, const Matrix& x, std::size_t i, const Matrix& y, std::size_t j);

BoundReport theorem_bound(const TripartiteScenario& scenario, MdrId mdr, const GammaResult& gamma);
BoundReport theorem_bound(const TripartiteScenario& scenario, MdrId mdr, const SearchBudget& budget = {});

/// E(Z_2, Z_3) + E(X_1, X_2) on any three-qubit state.
double correlation_sum_3q(const StateVector& psi123);

/// Simulated E(Z_2,Z_3) + E(X_1,X_2) of the reference scenario at theta3.
/// Throws IdentityViolation if it differs from cos(2 theta3) + sin(2 theta3) by more than 1e-10.
double qm_correlation_sum(double theta3);

struct ChshSettings {
  std::array<double, 3> a;  // directions as (x, y, z)
  std::array<double, 3> b;
  std::array<double, 3> c;
  std::array<double, 3> d;

  /// a = z, b = x, c = (x + z)/sqrt 2, d = (x - z)/sqrt 2.
  static ChshSettings standard();
};

struct ChshReport {
  double b23;  // <B_CHSH^(23)>
  double b12;  // <B_CHSH^(12)>
  double sum;
  /// E(Z2,Z3) + E(X1,X2) + E(X2,X3) + E(Z1,Z2); sum equals sqrt 2 times this.
  double fourCorrelationSum;
};

/// Throws NotQubit unless psi123 is a three-qubit state.
ChshReport chsh_pair_sum(const StateVector& psi123, const ChshSettings& settings = ChshSettings::standard());
ChshReport chsh_pair_sum(const TripartiteScenario& scenario, const ChshSettings& settings = ChshSettings::standard());

/// 2 sqrt 2 (2 - gamma_q / 2).
double chsh_bound(double gamma);

/// cos(2 theta) + sin(2 theta) cos(phi): the upper envelope of
/// E(Z2,Z3) + E(X1,X2) in the (|r1|, |r2|) = (cos theta, sin theta) reduction.
double reduced_correlation_form(double theta, double phi);

struct ReducedCoordinates {
  double theta;
  double phi;
};

/// (theta, phi) of a three-qubit state in that reduction.
ReducedCoordinates reduced_coordinates(const StateVector& psi123);

struct MaxCorrResult {
  double value;
  StateVector argmax;
  ReducedCoordinates reduced;
  int restarts;
};

/// Random-restart projected gradient ascent of E(Z2,Z3) + E(X1,X2) over
/// normalized three-qubit states.
MaxCorrResult max_corr_search(int restarts, std::uint64_t seed);

struct LambdaReport {
  BoundReport bound;          // evaluated on the filtered state psi~123
  double gamma;               // gamma_q of psi12
  double gammaTilde;          // max over bases for Lambda_2 psi12 (unnormalized weights)
  double normalization;       // <psi123|(Lambda^dagger Lambda)_2^2|psi123>
  double xi;                  // <psi123|(A_3 - A'_2)^2 + (B_1 - B'_2)^2|psi123>
};

/// Filters psi123 by Lambda^dagger Lambda on particle 2 and checks the
/// generalized correlation bound with gamma~^2 / (gamma N) in place of gamma.
/// Throws Singular when cond(Lambda) >= 1e6, NotQubit for N != 2.
LambdaReport lambda_generalized_check(const TripartiteScenario& scenario, const Matrix& lambda, MdrId mdr,
                                      const GammaResult& gamma, const SearchBudget& budget = {});

}  // namespace mdrlab
