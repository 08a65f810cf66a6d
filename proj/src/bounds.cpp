#include "mdrlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "mdrlab/error.hpp"
#include "mdrlab/optimize.hpp"

namespace mdrlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

Matrix unitary_from_params(std::span<const double> x, std::size_t n) {
  // Hermitian generator: diagonal from the first n entries, then real and
  // imaginary parts of the strict upper triangle.
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = x[k++];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z(x[k], x[k + 1]);
      k += 2;
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = z;
      h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = std::conj(z);
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Eigen::VectorXcd phases = (Complex(0.0, 1.0) * solver.eigenvalues().cast<Complex>()).array().exp();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

GammaResult finish(MdrId mdr, const StateVector& psi12, const Matrix& A, const Matrix& B, ProjectionBasis basis,
                   GammaResult base) {
  base.perBranch.clear();
  base.value = basis_objective(mdr, psi12, A, B, basis, &base.perBranch);
  base.argmaxBasis = std::move(basis);
  return base;
}

GammaResult qubit_search(MdrId mdr, const StateVector& psi12, const Matrix& A, const Matrix& B,
                         const SearchBudget& budget) {
  const std::size_t g = std::max<std::size_t>(budget.grid, 2);
  // p and its orthogonal partner sit at antipodal Bloch points, so one
  // closed hemisphere of polar angles covers every basis.
  const double dpolar = (kPi / 2.0) / static_cast<double>(g - 1);
  const double dazimuth = 2.0 * kPi / static_cast<double>(g);
  auto objective = [&](double polar, double azimuth) {
    return basis_objective(mdr, psi12, A, B, ProjectionBasis::qubit(polar, azimuth));
  };

  std::vector<double> grid(g * g);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) grid[i * g + j] = objective(dpolar * i, dazimuth * j);
  }

  double slope = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const double v = grid[i * g + j];
      if (i + 1 < g) slope = std::max(slope, std::abs(grid[(i + 1) * g + j] - v) / dpolar);
      // Azimuthal steps shrink to sin(polar) * dazimuth of arc near the pole.
      const double arc = std::max(std::sin(dpolar * i), std::sin(dpolar)) * dazimuth;
      slope = std::max(slope, std::abs(grid[i * g + (j + 1) % g] - v) / arc);
    }
  }

  std::vector<std::size_t> order(grid.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  const auto starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(budget.refineStarts, 1)), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                    [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });

  double best_value = grid[order[0]];
  double best_polar = dpolar * (order[0] / g), best_azimuth = dazimuth * (order[0] % g);
  for (std::size_t s = 0; s < starts; ++s) {
    const std::size_t k = order[s];
    const auto refined = optimize::simplex_minimize(
        [&](std::span<const double> x) { return -objective(x[0], x[1]); },
        {dpolar * (k / g), dazimuth * (k % g)}, 0.5 * dpolar, budget.sizeTolerance, budget.maxIterations);
    if (-refined.value > best_value) {
      best_value = -refined.value;
      best_polar = refined.x[0];
      best_azimuth = refined.x[1];
    }
  }

  // B2 has a kink (not a quadratic cap) where |<C>| reaches Delta A Delta B, so
  // its value error tracks the simplex size; polish the winner on a small simplex.
  if (mdr == MdrId::B2) {
    const auto polished = optimize::simplex_minimize(
        [&](std::span<const double> x) { return -objective(x[0], x[1]); }, {best_polar, best_azimuth},
        1e-3, 1e-13, std::min(budget.maxIterations, 500));
    if (-polished.value > best_value) {
      best_value = -polished.value;
      best_polar = polished.x[0];
      best_azimuth = polished.x[1];
    }
  }

  GammaResult out;
  out.gridCertified = true;
  out.gridSpacing = std::max(dpolar, dazimuth);
  out.lipschitzEstimate = slope;
  out.upperEstimate = grid[order[0]] + slope * out.gridSpacing;
  return finish(mdr, psi12, A, B, ProjectionBasis::qubit(best_polar, best_azimuth), std::move(out));
}

GammaResult general_search(MdrId mdr, const StateVector& psi12, const Matrix& A, const Matrix& B,
                           const SearchBudget& budget) {
  const std::size_t n = psi12.dims()[1];
  const std::size_t params = n * n;
  const Matrix C = (A * B - B * A) / Complex(0.0, 2.0);

  std::vector<Matrix> anchors{Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                              hermitian_eig(C).eigenvectors, hermitian_eig(Matrix(C.conjugate())).eigenvectors};
  for (int r = 0; r < budget.restarts; ++r) anchors.push_back(random_unitary(n, budget.seed + static_cast<std::uint64_t>(r)));

  double best_value = -1.0;
  Matrix best_basis;
  for (const Matrix& anchor : anchors) {
    auto objective = [&](std::span<const double> x) {
      const Matrix u = anchor * unitary_from_params(x, n);
      return -basis_objective(mdr, psi12, A, B, ProjectionBasis::from_unitary(u));
    };
    const auto refined = optimize::simplex_minimize(objective, std::vector<double>(params, 0.0), 0.3,
                                                    budget.sizeTolerance, budget.maxIterations);
    if (-refined.value > best_value) {
      best_value = -refined.value;
      best_basis = anchor * unitary_from_params(refined.x, n);
    }
  }
  // Re-orthonormalize before handing the basis out.
  Eigen::HouseholderQR<Matrix> qr(best_basis);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (std::abs(r(j, j)) > 0.0) q.col(j) *= r(j, j) / std::abs(r(j, j));
  }
  return finish(mdr, psi12, A, B, ProjectionBasis::from_unitary(q), GammaResult{});
}

double second_moment(const StateVector& state, const Matrix& op, std::size_t site, const Dims& dims) {
  return expectation(state, embed(op * op, site, dims));
}

BoundReport bound_on(const StateVector& state, const NonfactorableState& src, MdrId mdr, double gamma_term) {
  const Dims& dims = state.dims();
  const double lhs = correlation(state, src.Aprime, kPartnerSite, src.pair.A, kMeterSite) +
                     correlation(state, src.Bprime, kPartnerSite, src.pair.B, kSystemSite);
  const double moments = second_moment(state, src.Aprime, kPartnerSite, dims) +
                         second_moment(state, src.pair.A, kMeterSite, dims) +
                         second_moment(state, src.Bprime, kPartnerSite, dims) +
                         second_moment(state, src.pair.B, kSystemSite, dims);
  const double rhs = 0.5 * (moments - gamma_term);
  return {lhs, rhs, mdr, rhs - lhs};
}

void require_three_qubits(const StateVector& psi123) {
  if (psi123.dims() != Dims{2, 2, 2}) throw Error(ErrorCode::NotQubit, "expected a three-qubit state");
}

Matrix correlation_sum_operator() {
  const Dims dims{2, 2, 2};
  const std::array<std::size_t, 2> s23{1, 2}, s12{0, 1};
  return embed(tensor(pauli::z(), pauli::z()), s23, dims) + embed(tensor(pauli::x(), pauli::x()), s12, dims);
}

}  // namespace

double basis_objective(MdrId mdr, const StateVector& psi12, const Matrix& A, const Matrix& B,
                       const ProjectionBasis& basis, std::vector<BranchValue>* branches) {
  const ProjectedEnsemble ensemble = project_particle2(psi12, basis);
  double total = 0.0;
  for (const auto& entry : ensemble.entries) {
    double f = 0.0;
    if (entry.state) f = shortest_distance_sq(mdr, ensemble_context(*entry.state, A, B));
    total += entry.weight * f;
    if (branches) branches->push_back({entry.weight, f});
  }
  return total;
}

GammaResult gamma_search(MdrId mdr, const StateVector& psi12, const Matrix& A, const Matrix& B,
                         const SearchBudget& budget) {
  if (psi12.dims().size() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a bipartite state");
  const std::size_t n = psi12.dims()[1];
  if (n > kMaxSearchDim) {
    throw Error(ErrorCode::DimensionTooLarge, "gamma_q search is limited to N <= " + std::to_string(kMaxSearchDim));
  }
  if (mdr == MdrId::B2 && n != 2) throw Error(ErrorCode::OutOfDomain, "B2 applies to qubits only");
  return n == 2 ? qubit_search(mdr, psi12, A, B, budget) : general_search(mdr, psi12, A, B, budget);
}

GammaResult gamma_q(MdrId mdr, const NonfactorableState& source, const SearchBudget& budget) {
  return gamma_search(mdr, source.psi12, source.pair.A, source.pair.B, budget);
}

double correlation(const StateVector& state, const Matrix& x, std::size_t i, const Matrix& y, std::size_t j) {
  if (i == j) throw Error(ErrorCode::InvalidArgument, "correlation needs two different sites");
  const std::array<std::size_t, 2> sites{i, j};
  return expectation(state, embed(tensor(x, y), sites, state.dims()));
}

BoundReport theorem_bound(const TripartiteScenario& scenario, MdrId mdr, const GammaResult& gamma) {
  return bound_on(scenario.psi123, scenario.source, mdr, gamma.value);
}

BoundReport theorem_bound(const TripartiteScenario& scenario, MdrId mdr, const SearchBudget& budget) {
  return theorem_bound(scenario, mdr, gamma_q(mdr, scenario.source, budget));
}

double correlation_sum_3q(const StateVector& psi123) {
  require_three_qubits(psi123);
  return correlation(psi123, pauli::z(), 1, pauli::z(), 2) + correlation(psi123, pauli::x(), 0, pauli::x(), 1);
}

double qm_correlation_sum(double theta3) {
  const TripartiteScenario scenario = reference_scenario(theta3);
  const double simulated = correlation_sum_3q(scenario.psi123);
  const double closed = std::cos(2.0 * theta3) + std::sin(2.0 * theta3);
  if (std::abs(simulated - closed) > 1e-10) {
    throw Error(ErrorCode::IdentityViolation, "simulated correlation sum departs from cos 2t + sin 2t");
  }
  return simulated;
}

ChshSettings ChshSettings::standard() {
  const double h = 1.0 / kSqrt2;
  return {{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {h, 0.0, h}, {h, 0.0, -h}};
}

ChshReport chsh_pair_sum(const StateVector& psi123, const ChshSettings& settings) {
  require_three_qubits(psi123);
  for (const auto& n : {settings.a, settings.b, settings.c, settings.d}) {
    if (std::abs(std::hypot(n[0], n[1], n[2]) - 1.0) > 1e-12) {
      throw Error(ErrorCode::InvalidArgument, "CHSH directions must be unit vectors");
    }
  }
  const Matrix a = pauli::along(settings.a), b = pauli::along(settings.b);
  const Matrix c = pauli::along(settings.c), d = pauli::along(settings.d);
  auto E = [&](const Matrix& x, std::size_t i, const Matrix& y, std::size_t j) {
    return correlation(psi123, x, i, y, j);
  };
  const double b23 = E(a, 1, c, 2) - E(a, 1, d, 2) + E(b, 1, c, 2) + E(b, 1, d, 2);
  const double b12 = E(b, 0, c, 1) + E(b, 0, d, 1) + E(a, 0, c, 1) - E(a, 0, d, 1);
  const Matrix z = pauli::z(), x = pauli::x();
  const double four = E(z, 1, z, 2) + E(x, 0, x, 1) + E(x, 1, x, 2) + E(z, 0, z, 1);
  return {b23, b12, b23 + b12, four};
}

ChshReport chsh_pair_sum(const TripartiteScenario& scenario, const ChshSettings& settings) {
  return chsh_pair_sum(scenario.psi123, settings);
}

double chsh_bound(double gamma) { return 2.0 * kSqrt2 * (2.0 - gamma / 2.0); }

double reduced_correlation_form(double theta, double phi) {
  return std::cos(2.0 * theta) + std::sin(2.0 * theta) * std::cos(phi);
}

ReducedCoordinates reduced_coordinates(const StateVector& psi123) {
  require_three_qubits(psi123);
  // Amplitudes a1..a8 of |+++>, |++->, ..., |---> are indices 0..7.
  const std::array<std::size_t, 4> r1_index{0, 3, 4, 7};
  const std::array<std::size_t, 4> r2_index{6, 5, 2, 1};
  double n1 = 0.0, n2 = 0.0;
  Complex overlap = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const Complex u = psi123[r1_index[k]], v = psi123[r2_index[k]];
    n1 += std::norm(u);
    n2 += std::norm(v);
    overlap += std::conj(u) * v;
  }
  return {std::atan2(std::sqrt(n2), std::sqrt(n1)), std::arg(overlap)};
}

MaxCorrResult max_corr_search(int restarts, std::uint64_t seed) {
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "max_corr_search needs at least one restart");
  const Matrix h = correlation_sum_operator();
  const Dims dims{2, 2, 2};
  constexpr double kStep = 0.25;

  double best_value = -std::numeric_limits<double>::infinity();
  Vector best;
  for (int r = 0; r < restarts; ++r) {
    Vector v = random_state(dims, seed + static_cast<std::uint64_t>(r)).amplitudes();
    for (int it = 0; it < 20000; ++it) {
      const Vector hv = h * v;
      const double value = v.dot(hv).real();
      const Vector grad = hv - value * v;  // tangent ascent direction on the sphere
      if (grad.norm() < 1e-13) break;
      v = (v + kStep * grad).normalized();
    }
    const double value = v.dot(h * v).real();
    if (value > best_value) {
      best_value = value;
      best = v;
    }
  }
  StateVector argmax = StateVector::normalized(dims, best);
  const ReducedCoordinates reduced = reduced_coordinates(argmax);
  return {best_value, std::move(argmax), reduced, restarts};
}

LambdaReport lambda_generalized_check(const TripartiteScenario& scenario, const Matrix& lambda, MdrId mdr,
                                      const GammaResult& gamma, const SearchBudget& budget) {
  const NonfactorableState& src = scenario.source;
  if (src.dim() != 2) throw Error(ErrorCode::NotQubit, "the filtered-state check runs on qubit scenarios");
  if (lambda.rows() != 2 || lambda.cols() != 2) throw Error(ErrorCode::DimensionMismatch, "Lambda must be 2 x 2");
  Eigen::JacobiSVD<Matrix> svd(lambda);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) >= 1e6) {
    throw Error(ErrorCode::Singular, "Lambda is not safely invertible");
  }

  const Dims dims = scenario.dims();
  const Matrix filter = embed(lambda.adjoint() * lambda, kPartnerSite, dims);
  const Vector filtered = filter * scenario.psi123.amplitudes();
  const double normalization = filtered.squaredNorm();
  const StateVector psi_tilde = StateVector::normalized(dims, filtered);

  // Lambda_2 psi12 is not normalized; its branch weights carry ||Lambda_2 psi12||^2.
  const Vector lifted = embed(lambda, 1, src.psi12.dims()) * src.psi12.amplitudes();
  const double lifted_norm_sq = lifted.squaredNorm();
  const StateVector lifted_state = StateVector::normalized(src.psi12.dims(), lifted);
  const double gamma_tilde =
      lifted_norm_sq * gamma_search(mdr, lifted_state, src.pair.A, src.pair.B, budget).value;

  const WeightedErrors xi_parts = direct_error_sums(scenario);
  const double correction = gamma_tilde * gamma_tilde / (gamma.value * normalization);
  return {bound_on(psi_tilde, src, mdr, correction), gamma.value, gamma_tilde, normalization,
          xi_parts.precision + xi_parts.disturbance};
}

}  // namespace mdrlab
