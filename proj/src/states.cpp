#include "ebcommit/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebc {

namespace {

void require_bit(int value, const char* what) {
  if (value != 0 && value != 1) {
    throw std::invalid_argument(std::string(what) + " must be 0 or 1");
  }
}

}  // namespace

Bb84Symbol::Bb84Symbol(int bit, int variant) : bit(bit), variant(variant) {
  require_bit(bit, "bit");
  require_bit(variant, "variant");
}

Bb84Basis encoding_basis(int bit) {
  require_bit(bit, "bit");
  return bit == 0 ? Bb84Basis::Rectilinear : Bb84Basis::Diagonal;
}

StateVector bb84_state(const Bb84Symbol& symbol) {
  require_bit(symbol.bit, "bit");
  require_bit(symbol.variant, "variant");
  if (symbol.bit == 0) return StateVector::basis(2, static_cast<std::size_t>(symbol.variant));
  const double h = std::numbers::sqrt2 / 2.0;
  return symbol.variant == 0 ? StateVector({h, h}) : StateVector({h, -h});
}

DensityMatrix bb84_bit_average(int bit) {
  const ComplexMatrix mix =
      (bb84_state({bit, 0}).projector() + bb84_state({bit, 1}).projector()) * 0.5;
  return DensityMatrix(mix);
}

StateVector bell_psi_plus() {
  const double h = std::numbers::sqrt2 / 2.0;
  return StateVector({h, 0.0, 0.0, h});
}

DensityMatrix isotropic(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("isotropic: q must lie in [0, 1]");
  const ComplexMatrix m =
      q * bell_psi_plus().projector() + ((1.0 - q) / 4.0) * ComplexMatrix::identity(4);
  return DensityMatrix(m);
}

DensityMatrix cheat_state(const StateVector& a0, const StateVector& a1) {
  if (a0.dim() != 2 || a1.dim() != 2) {
    throw DimensionError("cheat_state: Alice's amplitudes must be qubit states");
  }
  const std::array<cplx, 4> joint{a0[0], a1[0], a0[1], a1[1]};
  double norm2 = 0.0;
  for (const auto& v : joint) norm2 += std::norm(v);
  if (norm2 < 1e-24) throw InvalidStateError("cheat_state: joint vector has zero norm");
  return DensityMatrix::pure(StateVector::normalized(joint));
}

// ---------------------------------------------------------------------------

ProjectiveBasis::ProjectiveBasis(double theta, double phi) : theta_(theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw std::invalid_argument("ProjectiveBasis: theta must lie in [0, pi]");
  }
  if (!std::isfinite(phi)) throw std::invalid_argument("ProjectiveBasis: phi must be finite");
  phi_ = std::fmod(phi, 2.0 * std::numbers::pi);
  if (phi_ < 0.0) phi_ += 2.0 * std::numbers::pi;
}

ProjectiveBasis ProjectiveBasis::from(Bb84Basis basis) {
  return basis == Bb84Basis::Rectilinear ? ProjectiveBasis(0.0, 0.0)
                                         : ProjectiveBasis(std::numbers::pi / 2.0, 0.0);
}

StateVector ProjectiveBasis::vector(int outcome) const {
  require_bit(outcome, "outcome");
  const double c = std::cos(theta_ / 2.0);
  const double s = std::sin(theta_ / 2.0);
  if (outcome == 0) return StateVector({c, std::polar(s, phi_)});
  // Chosen so that the rectilinear and diagonal bases give |1> and |->.
  if (theta_ <= std::numbers::pi / 4.0) return StateVector({-std::polar(s, -phi_), c});
  return StateVector({s, -std::polar(c, phi_)});
}

ComplexMatrix ProjectiveBasis::projector(int outcome) const {
  return vector(outcome).projector();
}

MeasurementResult measure(const DensityMatrix& rho, const ProjectiveBasis& basis, double rand) {
  if (rho.dim() != 2) throw DimensionError("measure: expected a qubit state");
  const StateVector b0 = basis.vector(0);
  double p0 = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      p0 += (std::conj(b0[i]) * rho.matrix()(i, j) * b0[j]).real();
  p0 = std::clamp(p0, 0.0, 1.0);
  const int outcome = rand < p0 ? 0 : 1;
  return {outcome, outcome == 0 ? p0 : 1.0 - p0, basis.vector(outcome)};
}

ConditionalState conditional_state(const DensityMatrix& rho, Subsystem side,
                                   const ProjectiveBasis& basis, int outcome) {
  if (!rho.is_two_qubit()) throw DimensionError("conditional_state: expected a two-qubit state");
  const ComplexMatrix p = basis.projector(outcome);
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix lifted = side == Subsystem::A ? kron(p, id) : kron(id, p);
  const ComplexMatrix projected = lifted * rho.matrix() * lifted;
  const double prob = std::clamp(projected.trace().real(), 0.0, 1.0);
  ConditionalState out{prob, std::nullopt};
  if (prob >= kMinOutcomeProbability) {
    const Subsystem keep = side == Subsystem::A ? Subsystem::B : Subsystem::A;
    const ComplexMatrix reduced = partial_trace(projected, keep);
    out.state = DensityMatrix(reduced * (1.0 / reduced.trace().real()));
  }
  return out;
}

JointMeasurementResult measure_joint(const DensityMatrix& rho, Subsystem side,
                                     const ProjectiveBasis& basis, double rand) {
  ConditionalState zero = conditional_state(rho, side, basis, 0);
  ConditionalState one = conditional_state(rho, side, basis, 1);
  int outcome;
  if (!zero.state) {
    outcome = 1;
  } else if (!one.state) {
    outcome = 0;
  } else {
    outcome = rand < zero.probability ? 0 : 1;
  }
  ConditionalState& chosen = outcome == 0 ? zero : one;
  return {outcome, chosen.probability, std::move(*chosen.state)};
}

}  // namespace ebc
