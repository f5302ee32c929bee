#include "ebcommit/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ebc {

namespace {

ComplexMatrix spin_flip() {
  return kron(pauli::y(), pauli::y());
}

}  // namespace

ConcurrenceResult concurrence(const DensityMatrix& rho) {
  if (!rho.is_two_qubit()) throw InvalidStateError("concurrence: expected a two-qubit state");
  const ComplexMatrix& m = rho.matrix();
  const ComplexMatrix flip = spin_flip();
  const ComplexMatrix tilde = (flip * m.conjugate() * flip).hermitian_part();
  // lambda_i^2 are the eigenvalues of rho * rho_tilde, i.e. of the Hermitian
  // sqrt(rho) rho_tilde sqrt(rho); lambda_i are the singular values of
  // sqrt(rho) sqrt(rho_tilde).
  const std::vector<double> singular = sqrt_product_singular_values(m, tilde);

  ConcurrenceResult out;
  std::copy(singular.begin(), singular.end(), out.lambdas.begin());
  std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());
  const auto& l = out.lambdas;
  out.value = std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
  return out;
}

double min_partial_transpose_eigenvalue(const DensityMatrix& rho) {
  if (!rho.is_two_qubit()) throw InvalidStateError("expected a two-qubit state");
  return eigenvalues_hermitian(partial_transpose(rho.matrix(), Subsystem::B)).back();
}

bool is_separable(const DensityMatrix& rho, double tol) {
  return min_partial_transpose_eigenvalue(rho) >= -tol;
}

double factorization_residual(const StateVector& x, const KrausChannel& channel) {
  if (x.dim() != 4) throw DimensionError("factorization_residual: expected a two-qubit state");
  const DensityMatrix input = DensityMatrix::pure(x);
  const double lhs = concurrence(lift_apply(channel, input)).value;
  const double rhs = concurrence(input).value * concurrence(choi(channel)).value;
  return std::abs(lhs - rhs);
}

ChannelFamily depolarizing_family() {
  return [](double q) { return as_kraus(DepolarizingChannel(q)); };
}

double eb_threshold(const ChannelFamily& family, double lo, double hi, double width,
                    double ppt_tol) {
  if (!(lo < hi)) throw std::invalid_argument("eb_threshold: need lo < hi");
  if (!(width > 0.0)) throw std::invalid_argument("eb_threshold: width must be positive");
  const bool lo_eb = is_entanglement_breaking(family(lo), ppt_tol);
  const bool hi_eb = is_entanglement_breaking(family(hi), ppt_tol);
  if (lo_eb == hi_eb) {
    throw std::domain_error(std::string("eb_threshold: no classification change on [lo, hi] (") +
                            (lo_eb ? "both entanglement breaking" : "both not entanglement breaking") +
                            ")");
  }
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (is_entanglement_breaking(family(mid), ppt_tol) == lo_eb) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ebc
