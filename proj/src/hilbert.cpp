#include "mdrlab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "mdrlab/error.hpp"

namespace mdrlab {

namespace {

Matrix complex_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
  }
}

// Mixed-radix digits of `index`, site 0 most significant.
void split_index(std::size_t index, const Dims& dims, std::vector<std::size_t>& digits) {
  digits.resize(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
}

}  // namespace

std::size_t product(const Dims& dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tolerance) { return hermiticity_defect(m) <= tolerance; }

bool is_unitary(const Matrix& m, double tolerance) { return unitarity_defect(m) <= tolerance; }

StateVector::StateVector(Dims dims, Vector amplitudes) : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  if (dims_.empty() || std::any_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d == 0; })) {
    throw Error(ErrorCode::InvalidArgument, "state dims must be non-empty and positive");
  }
  if (static_cast<std::size_t>(amps_.size()) != product(dims_)) {
    throw Error(ErrorCode::DimensionMismatch, "amplitude count does not match dims");
  }
  const double norm = amps_.norm();
  if (std::abs(norm * norm - 1.0) > tol::kConstruction) {
    throw Error(ErrorCode::NotNormalized, "state norm^2 = " + std::to_string(norm * norm));
  }
}

StateVector StateVector::normalized(Dims dims, Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::NotNormalized, "cannot normalize a zero or non-finite vector");
  }
  amplitudes /= norm;
  return StateVector(std::move(dims), std::move(amplitudes));
}

StateVector StateVector::basis(Dims dims, std::size_t index) {
  const std::size_t n = product(dims);
  if (index >= n) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(dims), std::move(v));
}

bool SpectralDecomposition::degenerate() const {
  for (Eigen::Index i = 1; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) - eigenvalues(i - 1) < tol::kDegeneracyGap) return true;
  }
  return false;
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  const Vector& va = a.amplitudes();
  const Vector& vb = b.amplitudes();
  Vector out(va.size() * vb.size());
  for (Eigen::Index i = 0; i < va.size(); ++i) out.segment(i * vb.size(), vb.size()) = va(i) * vb;
  // Products of unit vectors can drift by an ulp or two; renormalize.
  return StateVector::normalized(std::move(dims), std::move(out));
}

SpectralDecomposition hermitian_eig(const Matrix& m) {
  require_square(m, "hermitian_eig input");
  const double defect = hermiticity_defect(m);
  if (defect > tol::kConstruction) {
    throw Error(ErrorCode::NotHermitian, "hermiticity defect " + std::to_string(defect));
  }
  // Symmetrize so both triangles agree exactly; the solver reads only one.
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.eigenvectors.rows(); ++i) {
      const Complex c = out.eigenvectors(i, j);
      if (std::abs(c) > tol::kPhaseCutoff) {
        out.eigenvectors.col(j) *= std::conj(c) / std::abs(c);
        out.eigenvectors(i, j) = Complex(out.eigenvectors(i, j).real(), 0.0);
        break;
      }
    }
  }
  return out;
}

Matrix basis_change(const SpectralDecomposition& from, const SpectralDecomposition& to) {
  if (from.dim() != to.dim()) throw Error(ErrorCode::DimensionMismatch, "basis_change dimensions differ");
  if (from.degenerate() || to.degenerate()) {
    throw Error(ErrorCode::Degenerate, "basis_change needs simple spectra");
  }
  return from.eigenvectors.adjoint() * to.eigenvectors;
}

double expectation(const StateVector& state, const Matrix& op) {
  require_square(op, "observable");
  if (static_cast<std::size_t>(op.rows()) != state.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "observable does not match state dimension");
  }
  const Complex value = state.amplitudes().dot(op * state.amplitudes());
  if (std::abs(value.imag()) > tol::kAlgebraic) {
    throw Error(ErrorCode::NotHermitian, "expectation has imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}

double std_dev(const StateVector& state, const Matrix& op) {
  const double mean = expectation(state, op);
  const double second = expectation(state, op * op);
  const double var = second - mean * mean;
  if (var < -tol::kConstruction) {
    throw Error(ErrorCode::NotHermitian, "negative variance " + std::to_string(var));
  }
  return std::sqrt(std::max(var, 0.0));
}

StateVector apply(const Matrix& op, const StateVector& state) {
  if (op.cols() != static_cast<Eigen::Index>(state.dim()) || op.rows() != op.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "operator does not match state dimension");
  }
  return StateVector::normalized(state.dims(), op * state.amplitudes());
}

Matrix embed(const Matrix& op, std::span<const std::size_t> sites, const Dims& dims) {
  require_square(op, "embedded operator");
  std::size_t sub = 1;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (sites[k] >= dims.size()) throw Error(ErrorCode::DimensionMismatch, "site index out of range");
    for (std::size_t l = 0; l < k; ++l) {
      if (sites[l] == sites[k]) throw Error(ErrorCode::InvalidArgument, "repeated site in embed");
    }
    sub *= dims[sites[k]];
  }
  if (static_cast<std::size_t>(op.rows()) != sub) {
    throw Error(ErrorCode::DimensionMismatch, "operator size does not match the chosen sites");
  }
  std::vector<bool> acted(dims.size(), false);
  for (auto s : sites) acted[s] = true;

  const std::size_t n = product(dims);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::size_t> ri, ci;
  for (std::size_t r = 0; r < n; ++r) {
    split_index(r, dims, ri);
    for (std::size_t c = 0; c < n; ++c) {
      split_index(c, dims, ci);
      bool spectators_match = true;
      for (std::size_t k = 0; k < dims.size() && spectators_match; ++k) {
        if (!acted[k] && ri[k] != ci[k]) spectators_match = false;
      }
      if (!spectators_match) continue;
      std::size_t rs = 0, cs = 0;
      for (auto s : sites) {
        rs = rs * dims[s] + ri[s];
        cs = cs * dims[s] + ci[s];
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          op(static_cast<Eigen::Index>(rs), static_cast<Eigen::Index>(cs));
    }
  }
  return out;
}

Matrix embed(const Matrix& op, std::size_t site, const Dims& dims) {
  const std::array<std::size_t, 1> sites{site};
  return embed(op, sites, dims);
}

StateVector random_state(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector v = complex_gaussian(product(dims), 1, rng).col(0);
  return StateVector::normalized(dims, std::move(v));
}

Matrix random_hermitian(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix g = complex_gaussian(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix g = complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

namespace pauli {

Matrix identity() { return Matrix::Identity(2, 2); }

Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix along(const std::array<double, 3>& n) { return n[0] * x() + n[1] * y() + n[2] * z(); }

}  // namespace pauli

}  // namespace mdrlab
