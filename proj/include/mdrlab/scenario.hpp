#pragma once

// Tripartite scenario: particle 1 of a nonfactorable psi12 interacts with a
// meter (particle 3) through U13. Site mapping: 0 = system (particle 1),
// 1 = partner (particle 2), 2 = meter (particle 3).

#include "mdrlab/entangler.hpp"
#include "mdrlab/hilbert.hpp"

namespace mdrlab {

inline constexpr std::size_t kSystemSite = 0;
inline constexpr std::size_t kPartnerSite = 1;
inline constexpr std::size_t kMeterSite = 2;

struct TripartiteScenario {
  NonfactorableState source;
  StateVector meterState;
  Matrix interaction;  // U13 on (system, meter), system index most significant
  StateVector psi123;  // (U13 embedded on sites 0, 2) (psi12 x phi3)

  std::size_t dim() const noexcept { return source.dim(); }
  Dims dims() const { return {dim(), dim(), dim()}; }
};

/// Throws DimensionMismatch or NotUnitary.
TripartiteScenario make_scenario(NonfactorableState source, StateVector meterState, Matrix interaction);

/// cos(theta3)|+> + sin(theta3)|->, with |+> = |0> the +1 eigenstate of Z.
StateVector qubit_meter_state(double theta3);

/// A = Z, B = X, V = I (so A' = Z, B' = X), psi12 = (|++> + |-->)/sqrt 2,
/// meter cos(theta3)|+> + sin(theta3)|->, U13 = CNOT with particle 1 as control.
TripartiteScenario reference_scenario(double theta3);

}  // namespace mdrlab
