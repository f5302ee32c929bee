#pragma once

// Dense complex linear algebra for one- and two-qubit operators.
//
// Everything here works on matrices of dimension at most 4, stored inline, so
// values are cheap to copy and never allocate.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebc {

using cplx = std::complex<double>;

/// Thrown when operand shapes do not fit the operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an operation that needs a Hermitian operator gets something else.
class NotHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a matrix fails the density-matrix invariants.
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kHermitianTol = 1e-10;

enum class Subsystem { A, B };

/// Square complex matrix of dimension 1..4, row-major.
class ComplexMatrix {
 public:
  static constexpr std::size_t kMaxDim = 4;

  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::initializer_list<cplx> row_major);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> diag);
  static ComplexMatrix diagonal(std::initializer_list<double> diag);

  std::size_t dim() const noexcept { return dim_; }

  cplx& operator()(std::size_t row, std::size_t col) noexcept {
    return data_[row * dim_ + col];
  }
  const cplx& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * dim_ + col];
  }

  std::span<const cplx> entries() const noexcept {
    return {data_.data(), dim_ * dim_};
  }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  cplx trace() const noexcept;

  /// max |M[i][j] - conj(M[j][i])|
  double hermiticity_error() const noexcept;
  /// (M + M^dagger) / 2
  ComplexMatrix hermitian_part() const;

  /// Largest entrywise modulus.
  double max_abs() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx scale) noexcept;

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs += rhs;
  }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    return lhs -= rhs;
  }
  friend ComplexMatrix operator*(ComplexMatrix lhs, cplx scale) noexcept {
    return lhs *= scale;
  }
  friend ComplexMatrix operator*(cplx scale, ComplexMatrix rhs) noexcept {
    return rhs *= scale;
  }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

  friend bool operator==(const ComplexMatrix& lhs, const ComplexMatrix& rhs) noexcept;

 private:
  std::size_t dim_ = 0;
  std::array<cplx, kMaxDim * kMaxDim> data_{};
};

/// max |a_ij - b_ij|; throws DimensionError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Normalized pure state of dimension 1..4.
class StateVector {
 public:
  static constexpr double kNormTol = 1e-12;

  StateVector() = default;
  /// Requires sum |a_i|^2 == 1 within kNormTol.
  StateVector(std::initializer_list<cplx> amplitudes);
  explicit StateVector(std::span<const cplx> amplitudes);

  /// Rescales arbitrary nonzero amplitudes to unit norm.
  static StateVector normalized(std::span<const cplx> amplitudes);
  static StateVector normalized(std::initializer_list<cplx> amplitudes);
  /// Computational basis vector |index>.
  static StateVector basis(std::size_t dim, std::size_t index);
  /// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
  static StateVector bloch(double theta, double phi);

  std::size_t dim() const noexcept { return dim_; }
  const cplx& operator[](std::size_t i) const noexcept { return amps_[i]; }
  std::span<const cplx> amplitudes() const noexcept { return {amps_.data(), dim_}; }

  /// |v><v|
  ComplexMatrix projector() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::size_t dim_ = 0;
  std::array<cplx, ComplexMatrix::kMaxDim> amps_{};
};

StateVector kron(const StateVector& a, const StateVector& b);
cplx inner(const StateVector& bra, const StateVector& ket);

/// Hermitian, positive semidefinite, unit-trace matrix with its subsystem layout.
///
/// Construction validates every invariant within kHermitianTol and stores the
/// symmetrized matrix, so small roundoff from channel chains is absorbed here.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Subsystem layout defaults to a single system when dim is 2 and to 2x2 when 4.
  explicit DensityMatrix(const ComplexMatrix& mat);
  DensityMatrix(const ComplexMatrix& mat, std::vector<std::size_t> subsystems);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.dim(); }
  const std::vector<std::size_t>& subsystems() const noexcept { return subsystems_; }
  bool is_two_qubit() const noexcept { return subsystems_.size() == 2; }

  friend bool operator==(const DensityMatrix&, const DensityMatrix&) = default;

 private:
  ComplexMatrix mat_;
  std::vector<std::size_t> subsystems_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator of a 4x4 two-qubit operator on the kept subsystem.
ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep);
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

/// Transposes the chosen qubit of a 4x4 two-qubit operator. Pure index permutation.
ComplexMatrix partial_transpose(const ComplexMatrix& m, Subsystem on);

struct EigenDecomposition {
  /// Sorted descending.
  std::vector<double> values;
  /// Columns are eigenvectors, in the order of `values`.
  std::optional<ComplexMatrix> vectors;
};

/// Hermitian eigendecomposition by complex cyclic Jacobi rotations.
///
/// Inputs must be Hermitian within kHermitianTol and are symmetrized first.
EigenDecomposition eig_hermitian(const ComplexMatrix& m, bool with_vectors = false);
std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m);

/// Principal square root of a Hermitian PSD matrix; tiny negative eigenvalues clamp to 0.
ComplexMatrix sqrt_psd(const ComplexMatrix& m);

bool is_psd(const ComplexMatrix& m, double tol);

/// Singular values of any square matrix, sorted descending.
std::vector<double> singular_values(ComplexMatrix x);

/// Singular values of sqrt(a) sqrt(b) for PSD a and b, sorted descending.
///
/// Both operators are diagonalized and the product is formed on their supports
/// (eigenvalues at or below 1e-14 of the largest count as zero), so
/// rank-deficient inputs give exact zeros rather than square roots of roundoff.
std::vector<double> sqrt_product_singular_values(const ComplexMatrix& a, const ComplexMatrix& b);

/// 1/2 * ||a - b||_1
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Uhlmann fidelity tr sqrt(sqrt(a) b sqrt(a)), not squared.
double fidelity(const ComplexMatrix& a, const ComplexMatrix& b);
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

std::string to_string(const ComplexMatrix& m);

}  // namespace ebc
