#include "ebcommit/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ebcommit/states.hpp"

namespace ebc {

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus_ops) : ops_(std::move(kraus_ops)) {
  if (ops_.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
  ComplexMatrix completeness(2);
  for (const auto& k : ops_) {
    if (k.dim() != 2) throw DimensionError("KrausChannel: operators must be 2x2");
    completeness += k.adjoint() * k;
  }
  if (max_abs_diff(completeness, ComplexMatrix::identity(2)) > kCompletenessTol) {
    throw std::invalid_argument("KrausChannel: operators are not trace preserving");
  }
}

KrausChannel KrausChannel::identity() { return KrausChannel({ComplexMatrix::identity(2)}); }

ComplexMatrix KrausChannel::apply(const ComplexMatrix& x) const {
  if (x.dim() != 2) throw DimensionError("KrausChannel::apply: expected a 2x2 operator");
  ComplexMatrix out(2);
  for (const auto& k : ops_) out += k * x * k.adjoint();
  return out;
}

DensityMatrix KrausChannel::apply(const DensityMatrix& rho) const {
  return DensityMatrix(apply(rho.matrix()));
}

DepolarizingChannel::DepolarizingChannel(double q) : q_(q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("DepolarizingChannel: q must lie in [0, 1]");
  }
}

std::string_view to_string(NoiseLocation where) {
  return where == NoiseLocation::BobApparatus ? "bob" : "channel";
}

NoiseLocation parse_noise_location(std::string_view text) {
  if (text == "bob") return NoiseLocation::BobApparatus;
  if (text == "channel") return NoiseLocation::TransmissionChannel;
  throw std::invalid_argument("unknown noise location '" + std::string(text) + "'");
}

ComplexMatrix depolarize_apply(const DepolarizingChannel& c, const ComplexMatrix& x) {
  if (x.dim() != 2) throw DimensionError("depolarize_apply: expected a 2x2 operator");
  const double q = c.q();
  return q * x + ((1.0 - q) * 0.5 * x.trace()) * ComplexMatrix::identity(2);
}

DensityMatrix depolarize_apply(const DepolarizingChannel& c, const DensityMatrix& rho) {
  return DensityMatrix(depolarize_apply(c, rho.matrix()));
}

KrausChannel as_kraus(const DepolarizingChannel& c) {
  const double q = c.q();
  const double w_id = std::sqrt(q + (1.0 - q) / 4.0);
  const double w_pauli = std::sqrt((1.0 - q) / 4.0);
  std::vector<ComplexMatrix> ops{w_id * pauli::identity()};
  if (w_pauli > 0.0) {
    ops.push_back(w_pauli * pauli::x());
    ops.push_back(w_pauli * pauli::y());
    ops.push_back(w_pauli * pauli::z());
  }
  return KrausChannel(std::move(ops));
}

DensityMatrix lift_apply(const KrausChannel& c, const DensityMatrix& rho) {
  if (!rho.is_two_qubit()) throw DimensionError("lift_apply: expected a two-qubit state");
  ComplexMatrix out(4);
  for (const auto& k : c.ops()) {
    const ComplexMatrix lifted = kron(ComplexMatrix::identity(2), k);
    out += lifted * rho.matrix() * lifted.adjoint();
  }
  return DensityMatrix(out);
}

DensityMatrix lift_apply(const DepolarizingChannel& c, const DensityMatrix& rho) {
  if (!rho.is_two_qubit()) throw DimensionError("lift_apply: expected a two-qubit state");
  const double q = c.q();
  const ComplexMatrix alice = partial_trace(rho.matrix(), Subsystem::A);
  return DensityMatrix(q * rho.matrix() +
                       (1.0 - q) * kron(alice, ComplexMatrix::identity(2) * 0.5));
}

DensityMatrix choi(const KrausChannel& c) {
  return lift_apply(c, DensityMatrix::pure(bell_psi_plus()));
}

bool is_entanglement_breaking(const KrausChannel& c, double tol) {
  return is_psd(partial_transpose(choi(c).matrix(), Subsystem::B), tol);
}

}  // namespace ebc
