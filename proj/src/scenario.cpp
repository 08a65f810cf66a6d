#include "mdrlab/scenario.hpp"

#include <array>
#include <cmath>

#include "mdrlab/error.hpp"
#include "mdrlab/measurement.hpp"

namespace mdrlab {

TripartiteScenario make_scenario(NonfactorableState source, StateVector meterState, Matrix interaction) {
  const std::size_t n = source.dim();
  if (meterState.dim() != n) throw Error(ErrorCode::DimensionMismatch, "meter must match the particle dimension");
  if (interaction.rows() != static_cast<Eigen::Index>(n * n) || interaction.cols() != interaction.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "U13 must act on particles 1 and 3");
  }
  if (!is_unitary(interaction)) throw Error(ErrorCode::NotUnitary, "U13 is not unitary");
  const Dims dims{n, n, n};
  const std::array<std::size_t, 2> sites{kSystemSite, kMeterSite};
  const StateVector product_state = tensor(source.psi12, meterState);
  StateVector psi123 = StateVector::normalized(dims, embed(interaction, sites, dims) * product_state.amplitudes());
  return {std::move(source), std::move(meterState), std::move(interaction), std::move(psi123)};
}

StateVector qubit_meter_state(double theta3) {
  Vector v(2);
  v << std::cos(theta3), std::sin(theta3);
  return StateVector::normalized({2}, v);
}

TripartiteScenario reference_scenario(double theta3) {
  const auto pair = ObservablePair::make(pauli::z(), pauli::x());
  return make_scenario(build_nonfactorable(pair), qubit_meter_state(theta3), cnot(0, 1, {2, 2}));
}

}  // namespace mdrlab
