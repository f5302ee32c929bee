#pragma once

#include <string_view>
#include <vector>

#include "ebcommit/qmat.hpp"

namespace ebc {

/// Completely positive trace-preserving qubit map in Kraus form.
class KrausChannel {
 public:
  static constexpr double kCompletenessTol = 1e-10;

  /// Throws if the operators are not 2x2 or sum K^dagger K deviates from I.
  explicit KrausChannel(std::vector<ComplexMatrix> kraus_ops);

  static KrausChannel identity();

  const std::vector<ComplexMatrix>& ops() const noexcept { return ops_; }

  /// sum K rho K^dagger on a single qubit operator.
  ComplexMatrix apply(const ComplexMatrix& x) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  std::vector<ComplexMatrix> ops_;
};

/// eps(X) = q X + (1 - q) tr[X] I/2
class DepolarizingChannel {
 public:
  explicit DepolarizingChannel(double q);

  double q() const noexcept { return q_; }

 private:
  double q_;
};

/// Where Bob's noise is physically applied. Both locations act identically.
enum class NoiseLocation { BobApparatus, TransmissionChannel };

std::string_view to_string(NoiseLocation where);
NoiseLocation parse_noise_location(std::string_view text);

/// Closed-form depolarizing map on any 2x2 operator.
ComplexMatrix depolarize_apply(const DepolarizingChannel& c, const ComplexMatrix& x);
DensityMatrix depolarize_apply(const DepolarizingChannel& c, const DensityMatrix& rho);

/// Pauli-twirl Kraus form {sqrt(q + (1-q)/4) I, sqrt((1-q)/4) sigma_x,y,z}.
/// Zero-weight operators are dropped, so q = 1 yields the single operator I.
KrausChannel as_kraus(const DepolarizingChannel& c);

/// (I (x) K) rho (I (x) K)^dagger summed over Kraus operators: the channel acts on
/// Bob's qubit (subsystem B) only.
DensityMatrix lift_apply(const KrausChannel& c, const DensityMatrix& rho);

/// Depolarizing channel on Bob's qubit via q rho + (1 - q) Tr_B(rho) (x) I/2.
DensityMatrix lift_apply(const DepolarizingChannel& c, const DensityMatrix& rho);

/// Choi state (I (x) c)[|psi+><psi+|].
DensityMatrix choi(const KrausChannel& c);

/// PPT test on the Choi state, exact for qubit channels.
bool is_entanglement_breaking(const KrausChannel& c, double tol = 1e-10);

}  // namespace ebc
