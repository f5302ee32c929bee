#include "ebcommit/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ebc {

namespace {

constexpr double kJacobiTol = 1e-14;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kSupportTol = 1e-14;

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > ComplexMatrix::kMaxDim) {
    throw DimensionError("matrix dimension must be in 1..4, got " + std::to_string(dim));
  }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

void require_two_qubit(const ComplexMatrix& m, const char* what) {
  if (m.dim() != 4) {
    throw DimensionError(std::string(what) + ": expected a 4x4 two-qubit operator, got dim " +
                         std::to_string(m.dim()));
  }
}

std::vector<std::size_t> default_layout(std::size_t dim) {
  if (dim == 4) return {2, 2};
  return {dim};
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim) { check_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<cplx> row_major)
    : dim_(dim) {
  check_dim(dim);
  if (row_major.size() != dim * dim) {
    throw DimensionError("expected " + std::to_string(dim * dim) + " entries, got " +
                         std::to_string(row_major.size()));
  }
  std::copy(row_major.begin(), row_major.end(), data_.begin());
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(i, j) = std::conj((*this)(j, i));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(i, j) = (*this)(j, i);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out(*this);
  for (std::size_t k = 0; k < dim_ * dim_; ++k) out.data_[k] = std::conj(data_[k]);
  return out;
}

cplx ComplexMatrix::trace() const noexcept {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::hermiticity_error() const noexcept {
  double err = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      err = std::max(err, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return err;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    out(i, i) = (*this)(i, i).real();
    for (std::size_t j = i + 1; j < dim_; ++j) {
      const cplx v = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
  }
  return out;
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : entries()) m = std::max(m, std::abs(v));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+");
  for (std::size_t k = 0; k < dim_ * dim_; ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-");
  for (std::size_t k = 0; k < dim_ * dim_; ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) noexcept {
  for (std::size_t k = 0; k < dim_ * dim_; ++k) data_[k] *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx l = lhs(i, k);
      if (l == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += l * rhs(k, j);
    }
  return out;
}

bool operator==(const ComplexMatrix& lhs, const ComplexMatrix& rhs) noexcept {
  if (lhs.dim_ != rhs.dim_) return false;
  const auto a = lhs.entries();
  const auto b = rhs.entries();
  return std::equal(a.begin(), a.end(), b.begin());
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  return (a - b).max_abs();
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::initializer_list<cplx> amplitudes)
    : StateVector(std::span<const cplx>(amplitudes.begin(), amplitudes.size())) {}

StateVector::StateVector(std::span<const cplx> amplitudes) : dim_(amplitudes.size()) {
  check_dim(dim_);
  std::copy(amplitudes.begin(), amplitudes.end(), amps_.begin());
  double norm2 = 0.0;
  for (const auto& a : amplitudes) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > kNormTol) {
    throw InvalidStateError("state vector is not normalized (|psi|^2 = " +
                            std::to_string(norm2) + ")");
  }
}

StateVector StateVector::normalized(std::span<const cplx> amplitudes) {
  double norm2 = 0.0;
  for (const auto& a : amplitudes) norm2 += std::norm(a);
  if (!(norm2 > 0.0)) throw InvalidStateError("cannot normalize a zero vector");
  const double inv = 1.0 / std::sqrt(norm2);
  std::array<cplx, ComplexMatrix::kMaxDim> scaled{};
  for (std::size_t i = 0; i < amplitudes.size() && i < scaled.size(); ++i)
    scaled[i] = amplitudes[i] * inv;
  check_dim(amplitudes.size());
  return StateVector(std::span<const cplx>(scaled.data(), amplitudes.size()));
}

StateVector StateVector::normalized(std::initializer_list<cplx> amplitudes) {
  return normalized(std::span<const cplx>(amplitudes.begin(), amplitudes.size()));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  check_dim(dim);
  if (index >= dim) throw DimensionError("basis index out of range");
  std::array<cplx, ComplexMatrix::kMaxDim> amps{};
  amps[index] = 1.0;
  return StateVector(std::span<const cplx>(amps.data(), dim));
}

StateVector StateVector::bloch(double theta, double phi) {
  return StateVector({std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)});
}

ComplexMatrix StateVector::projector() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(i, j) = amps_[i] * std::conj(amps_[j]);
  return out;
}

StateVector kron(const StateVector& a, const StateVector& b) {
  if (a.dim() * b.dim() > ComplexMatrix::kMaxDim) {
    throw DimensionError("kron: product dimension exceeds 4");
  }
  std::array<cplx, ComplexMatrix::kMaxDim> amps{};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
  return StateVector::normalized(std::span<const cplx>(amps.data(), a.dim() * b.dim()));
}

cplx inner(const StateVector& bra, const StateVector& ket) {
  if (bra.dim() != ket.dim()) throw DimensionError("inner: dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < bra.dim(); ++i) s += std::conj(bra[i]) * ket[i];
  return s;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const ComplexMatrix& mat)
    : DensityMatrix(mat, default_layout(mat.dim())) {}

DensityMatrix::DensityMatrix(const ComplexMatrix& mat, std::vector<std::size_t> subsystems)
    : subsystems_(std::move(subsystems)) {
  const std::size_t product = std::accumulate(subsystems_.begin(), subsystems_.end(),
                                              std::size_t{1}, std::multiplies<>());
  if (subsystems_.empty() || product != mat.dim()) {
    throw DimensionError("subsystem layout does not multiply to the matrix dimension");
  }
  if (mat.hermiticity_error() > kHermitianTol) {
    throw InvalidStateError("density matrix is not Hermitian");
  }
  mat_ = mat.hermitian_part();
  if (std::abs(mat_.trace() - 1.0) > kHermitianTol) {
    throw InvalidStateError("density matrix trace is not 1");
  }
  // Rescale the last few ulps away so equal mixtures compare equal.
  mat_ *= 1.0 / mat_.trace().real();
  if (!is_psd(mat_, kHermitianTol)) {
    throw InvalidStateError("density matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return DensityMatrix(psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(ComplexMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

// ---------------------------------------------------------------------------
// Tensor structure

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim() * b.dim();
  if (n > ComplexMatrix::kMaxDim) throw DimensionError("kron: product dimension exceeds 4");
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (std::size_t k = 0; k < b.dim(); ++k)
        for (std::size_t l = 0; l < b.dim(); ++l)
          out(i * b.dim() + k, j * b.dim() + l) = a(i, j) * b(k, l);
  return out;
}

// Basis index of |a b> is 2a + b, so subsystem A is the high bit.
ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep) {
  require_two_qubit(m, "partial_trace");
  ComplexMatrix out(2);
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y)
      for (std::size_t t = 0; t < 2; ++t) {
        out(x, y) += keep == Subsystem::A ? m(2 * x + t, 2 * y + t) : m(2 * t + x, 2 * t + y);
      }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
  if (!rho.is_two_qubit()) throw DimensionError("partial_trace: state is not two-qubit");
  return DensityMatrix(partial_trace(rho.matrix(), keep));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Subsystem on) {
  require_two_qubit(m, "partial_transpose");
  ComplexMatrix out(4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t a2 = 0; a2 < 2; ++a2)
        for (std::size_t b2 = 0; b2 < 2; ++b2) {
          out(2 * a + b, 2 * a2 + b2) = on == Subsystem::B ? m(2 * a + b2, 2 * a2 + b)
                                                           : m(2 * a2 + b, 2 * a + b2);
        }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral routines

EigenDecomposition eig_hermitian(const ComplexMatrix& m, bool with_vectors) {
  if (m.hermiticity_error() > kHermitianTol) {
    throw NotHermitianError("eig_hermitian: matrix is not Hermitian (error " +
                            std::to_string(m.hermiticity_error()) + ")");
  }
  const std::size_t n = m.dim();
  ComplexMatrix a = m.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };
  const double scale = std::max(1.0, a.max_abs());

  for (int sweep = 0; sweep < kJacobiMaxSweeps && off_norm() > kJacobiTol * scale; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r < 1e-300) continue;
        // Phase e^{-i arg a_pq} on column q makes the pivot real, then a real
        // rotation annihilates it.
        const cplx phase = std::conj(apq) / r;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;

        ComplexMatrix g = ComplexMatrix::identity(n);
        g(p, p) = c;
        g(p, q) = s;
        g(q, p) = -s * phase;
        g(q, q) = c * phase;
        a = g.adjoint() * a * g;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (with_vectors) v = v * g;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenDecomposition out;
  out.values.reserve(n);
  for (std::size_t i : order) out.values.push_back(a(i, i).real());
  if (with_vectors) {
    ComplexMatrix sorted(n);
    for (std::size_t col = 0; col < n; ++col)
      for (std::size_t row = 0; row < n; ++row) sorted(row, col) = v(row, order[col]);
    out.vectors = sorted;
  }
  return out;
}

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& m) {
  return eig_hermitian(m, false).values;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  const auto eig = eig_hermitian(m, true);
  const auto& v = *eig.vectors;
  const std::size_t n = m.dim();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(0.0, eig.values[k]));
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += root * v(i, k) * std::conj(v(j, k));
  }
  return out;
}

bool is_psd(const ComplexMatrix& m, double tol) {
  return eigenvalues_hermitian(m).back() >= -tol;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "trace_distance");
  double s = 0.0;
  for (double lambda : eigenvalues_hermitian(a - b)) s += std::abs(lambda);
  return std::clamp(0.5 * s, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

// One-sided (Hestenes) Jacobi. Squaring into a Gram matrix would turn 1e-17
// eigen-noise into 3e-9 singular values, so the columns are orthogonalized directly.
std::vector<double> singular_values(ComplexMatrix x) {
  const std::size_t n = x.dim();
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        cplx gamma = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += std::norm(x(i, p));
          beta += std::norm(x(i, q));
          gamma += std::conj(x(i, p)) * x(i, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const cplx phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const cplx xp = x(i, p);
          const cplx xq = x(i, q) * phase;
          x(i, p) = c * xp - s * xq;
          x(i, q) = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(x(i, j));
    out[j] = std::sqrt(norm2);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> sqrt_product_singular_values(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "sqrt_product_singular_values");
  const std::size_t n = a.dim();
  const auto ea = eig_hermitian(a, true);
  const auto eb = eig_hermitian(b, true);

  auto support_weights = [n](const std::vector<double>& values) {
    std::array<double, ComplexMatrix::kMaxDim> w{};
    const double cutoff = kSupportTol * std::max(values.front(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (values[k] > cutoff && values[k] > 0.0) w[k] = std::sqrt(values[k]);
    }
    return w;
  };
  const auto wa = support_weights(ea.values);
  const auto wb = support_weights(eb.values);

  // X = Da^1/2 Va^dagger Vb Db^1/2, with exact zero rows/columns off the supports.
  ComplexMatrix x = ea.vectors->adjoint() * *eb.vectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) *= wa[i] * wb[j];
  return singular_values(x);
}

double fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "fidelity");
  double f = 0.0;
  for (double s : sqrt_product_singular_values(a, b)) f += s;
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  return fidelity(a.matrix(), b.matrix());
}

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix y() { return ComplexMatrix(2, {0.0, cplx(0, -1), cplx(0, 1), 0.0}); }
ComplexMatrix z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }
}  // namespace pauli

std::string to_string(const ComplexMatrix& m) {
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    os << (i == 0 ? "[" : " ");
    for (std::size_t j = 0; j < m.dim(); ++j) {
      os << (j == 0 ? "" : ", ") << m(i, j).real() << (m(i, j).imag() < 0 ? "-" : "+")
         << std::abs(m(i, j).imag()) << "i";
    }
    os << (i + 1 == m.dim() ? "]" : "\n");
  }
  return os.str();
}

}  // namespace ebc
