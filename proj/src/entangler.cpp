#include "mdrlab/entangler.hpp"

#include <cmath>
#include <string>

#include "mdrlab/error.hpp"

namespace mdrlab {

namespace {

Vector pair_sum(const Matrix& left, const Matrix& right) {
  const Eigen::Index n = left.rows();
  Vector out = Vector::Zero(n * right.rows());
  for (Eigen::Index i = 0; i < left.cols(); ++i) {
    for (Eigen::Index r = 0; r < n; ++r) out.segment(r * right.rows(), right.rows()) += left(r, i) * right.col(i);
  }
  return out / std::sqrt(static_cast<double>(left.cols()));
}

}  // namespace

ObservablePair ObservablePair::make(Matrix A, Matrix B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "observable pair must be square and equally sized");
  }
  if (hermiticity_defect(A) > tol::kConstruction || hermiticity_defect(B) > tol::kConstruction) {
    throw Error(ErrorCode::NotHermitian, "observable pair must be Hermitian");
  }
  if (hermitian_eig(A).degenerate() || hermitian_eig(B).degenerate()) {
    throw Error(ErrorCode::Degenerate, "observables need simple spectra");
  }
  Matrix C = (A * B - B * A) / Complex(0.0, 2.0);
  return {std::move(A), std::move(B), std::move(C)};
}

NonfactorableState assemble_nonfactorable(const ObservablePair& pair, const Matrix& U, const Matrix& V) {
  const Eigen::Index n = pair.A.rows();
  if (U.rows() != n || V.rows() != n) throw Error(ErrorCode::DimensionMismatch, "U, V must match the observables");
  if (!is_unitary(U)) throw Error(ErrorCode::NotUnitary, "U is not unitary");
  if (!is_unitary(V)) throw Error(ErrorCode::NotUnitary, "V is not unitary");

  SpectralDecomposition eigA = hermitian_eig(pair.A);
  SpectralDecomposition eigB = hermitian_eig(pair.B);
  Matrix W = basis_change(eigA, eigB);

  Matrix Uop = eigA.eigenvectors * U * eigA.eigenvectors.adjoint();
  Matrix Vop = eigB.eigenvectors * V * eigB.eigenvectors.adjoint();
  Matrix Aprime = Uop * pair.A * Uop.adjoint();
  Matrix Bprime = Vop * pair.B * Vop.adjoint();

  const Matrix primed = Uop * eigA.eigenvectors;
  const auto size = static_cast<std::size_t>(n);
  StateVector psi12 = StateVector::normalized({size, size}, pair_sum(eigA.eigenvectors, primed));

  return {std::move(psi12), pair, std::move(eigA), std::move(eigB), std::move(W), U, V,
          std::move(Uop), std::move(Vop), std::move(Aprime), std::move(Bprime)};
}

NonfactorableState build_nonfactorable(const ObservablePair& pair, const Matrix& V, Congruence congruence) {
  if (V.rows() != pair.A.rows() || V.cols() != pair.A.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "V must match the observables");
  }
  if (!is_unitary(V)) throw Error(ErrorCode::NotUnitary, "V is not unitary");
  const Matrix W = basis_change(hermitian_eig(pair.A), hermitian_eig(pair.B));
  const Matrix U = (congruence == Congruence::Transpose) ? Matrix(W * V * W.transpose())
                                                         : Matrix(W * V * W.adjoint());
  return assemble_nonfactorable(pair, U, V);
}

NonfactorableState build_nonfactorable(const ObservablePair& pair) {
  return build_nonfactorable(pair, Matrix::Identity(pair.A.rows(), pair.A.cols()));
}

TransferResiduals transfer_residuals(const StateVector& psi12, const Matrix& A, const Matrix& Aprime,
                                     const Matrix& B, const Matrix& Bprime) {
  const Dims& dims = psi12.dims();
  if (dims.size() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a bipartite state");
  const Vector& v = psi12.amplitudes();
  const double ra = ((embed(A, 0, dims) - embed(Aprime, 1, dims)) * v).norm();
  const double rb = ((embed(B, 0, dims) - embed(Bprime, 1, dims)) * v).norm();
  return {ra, rb};
}

TransferResiduals verify_transfer(const NonfactorableState& state) {
  return transfer_residuals(state.psi12, state.pair.A, state.Aprime, state.pair.B, state.Bprime);
}

double dual_basis_form(const NonfactorableState& state) {
  const Matrix primed = state.Vop * state.eigB.eigenvectors;
  return (state.psi12.amplitudes() - pair_sum(state.eigB.eigenvectors, primed)).norm();
}

std::vector<double> schmidt_coefficients(const StateVector& psi12) {
  const Dims& dims = psi12.dims();
  if (dims.size() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a bipartite state");
  const auto rows = static_cast<Eigen::Index>(dims[0]);
  const auto cols = static_cast<Eigen::Index>(dims[1]);
  // Row-major coefficient matrix: psi[i * cols + j] = M(i, j).
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = psi12.amplitudes()(i * cols + j);
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

}  // namespace mdrlab
