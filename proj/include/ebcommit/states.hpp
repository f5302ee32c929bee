#pragma once

#include <optional>

#include "ebcommit/qmat.hpp"

namespace ebc {

enum class Bb84Basis { Rectilinear, Diagonal };

/// One of the four commitment encodings: `bit` picks the pair, `variant` the state in it.
struct Bb84Symbol {
  int bit = 0;
  int variant = 0;

  Bb84Symbol() = default;
  Bb84Symbol(int bit, int variant);

  friend bool operator==(const Bb84Symbol&, const Bb84Symbol&) = default;
};

/// Bit 0 is encoded in the rectilinear pair, bit 1 in the diagonal pair.
Bb84Basis encoding_basis(int bit);

/// |0>, |1> for bit 0 and |+>, |-> for bit 1.
StateVector bb84_state(const Bb84Symbol& symbol);

/// Equal mixture of both variants of `bit`; I/2 for either bit.
DensityMatrix bb84_bit_average(int bit);

/// (|00> + |11>) / sqrt(2)
StateVector bell_psi_plus();

/// q |psi+><psi+| + (1 - q) I/4, the output of depolarizing Bob's half of |psi+>.
DensityMatrix isotropic(double q);

/// Normalized |a0>|0> + |a1>|1>: Alice keeps the first qubit, Bob receives the second.
DensityMatrix cheat_state(const StateVector& a0, const StateVector& a1);

/// Qubit measurement basis. The first vector is cos(t/2)|0> + e^{ip} sin(t/2)|1>,
/// the second is its orthogonal complement.
class ProjectiveBasis {
 public:
  ProjectiveBasis() = default;
  /// theta in [0, pi]; phi is reduced modulo 2 pi.
  ProjectiveBasis(double theta, double phi);

  static ProjectiveBasis computational() { return {}; }
  static ProjectiveBasis from(Bb84Basis basis);

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }

  StateVector vector(int outcome) const;
  ComplexMatrix projector(int outcome) const;

  friend bool operator==(const ProjectiveBasis&, const ProjectiveBasis&) = default;

 private:
  double theta_ = 0.0;
  double phi_ = 0.0;
};

struct MeasurementResult {
  int outcome = 0;
  double probability = 0.0;
  StateVector post_state;
};

/// Born-rule sample: outcome 0 iff `rand` < <b0|rho|b0>.
MeasurementResult measure(const DensityMatrix& rho, const ProjectiveBasis& basis, double rand);

/// Outcome probabilities below this are never returned by measure_joint.
inline constexpr double kMinOutcomeProbability = 1e-12;

struct ConditionalState {
  double probability = 0.0;
  /// Empty when the outcome probability is below kMinOutcomeProbability.
  std::optional<DensityMatrix> state;
};

/// Probability of `outcome` when `side` is measured, and the other side's state given it.
ConditionalState conditional_state(const DensityMatrix& rho, Subsystem side,
                                   const ProjectiveBasis& basis, int outcome);

struct JointMeasurementResult {
  int outcome = 0;
  double probability = 0.0;
  DensityMatrix conditional;
};

/// Measures one qubit of a two-qubit state and returns the other qubit's conditional state.
JointMeasurementResult measure_joint(const DensityMatrix& rho, Subsystem side,
                                     const ProjectiveBasis& basis, double rand);

}  // namespace ebc
