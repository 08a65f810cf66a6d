#pragma once

// Dense finite-dimensional Hilbert-space algebra.
//
// Index convention: in a tensor-factored space with dims (d0, d1, ..., dk),
// the basis index is i0*d1*...*dk + i1*d2*...*dk + ... + ik, i.e. site 0
// (particle 1) is the most significant digit. Sites are 0-based throughout
// the library.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mdrlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Dims = std::vector<std::size_t>;

namespace tol {
inline constexpr double kConstruction = 1e-12;
inline constexpr double kAlgebraic = 1e-10;
inline constexpr double kDegeneracyGap = 1e-9;
inline constexpr double kPhaseCutoff = 1e-9;
}  // namespace tol

std::size_t product(const Dims& dims);

/// Largest |M - M^dagger| entry.
double hermiticity_defect(const Matrix& m);
/// Largest |M^dagger M - I| entry; infinity for non-square input.
double unitarity_defect(const Matrix& m);

bool is_hermitian(const Matrix& m, double tolerance = tol::kConstruction);
bool is_unitary(const Matrix& m, double tolerance = tol::kAlgebraic);

/// Normalized pure state over a tensor-factored space.
class StateVector {
 public:
  /// Throws NotNormalized unless the amplitudes have unit norm within 1e-12,
  /// DimensionMismatch unless amplitudes.size() == product(dims).
  StateVector(Dims dims, Vector amplitudes);

  /// Rescales `amplitudes` to unit norm. Throws NotNormalized for a zero vector.
  static StateVector normalized(Dims dims, Vector amplitudes);
  static StateVector basis(Dims dims, std::size_t index);

  const Dims& dims() const noexcept { return dims_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

 private:
  Dims dims_;
  Vector amps_;
};

/// Eigenvalues ascending; eigenvector columns phase-fixed so that the first
/// component with modulus above 1e-9 is real and positive.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  /// True when two adjacent eigenvalues are closer than 1e-9.
  bool degenerate() const;
  Vector eigenvector(std::size_t i) const { return eigenvectors.col(static_cast<Eigen::Index>(i)); }
  Matrix reconstruct() const;
};

Matrix tensor(const Matrix& a, const Matrix& b);
StateVector tensor(const StateVector& a, const StateVector& b);

SpectralDecomposition hermitian_eig(const Matrix& m);

/// W with |to_i> = sum_mu |from_mu> W(mu, i). Throws DimensionMismatch or
/// Degenerate (W is not canonical when either spectrum has repeated values).
Matrix basis_change(const SpectralDecomposition& from, const SpectralDecomposition& to);

/// <psi|op|psi>. Throws NotHermitian when the imaginary residue exceeds 1e-10.
double expectation(const StateVector& state, const Matrix& op);
double std_dev(const StateVector& state, const Matrix& op);

StateVector apply(const Matrix& op, const StateVector& state);

/// Embeds `op`, acting on `sites` in the listed order, into the full space
/// described by `dims`.
Matrix embed(const Matrix& op, std::span<const std::size_t> sites, const Dims& dims);
Matrix embed(const Matrix& op, std::size_t site, const Dims& dims);

StateVector random_state(const Dims& dims, std::uint64_t seed);
Matrix random_hermitian(std::size_t dim, std::uint64_t seed);
/// Haar-distributed unitary (QR of a complex Gaussian matrix with the phases
/// of R's diagonal removed).
Matrix random_unitary(std::size_t dim, std::uint64_t seed);

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
/// n . sigma for a real direction (x, y, z).
Matrix along(const std::array<double, 3>& direction);
}  // namespace pauli

}  // namespace mdrlab
