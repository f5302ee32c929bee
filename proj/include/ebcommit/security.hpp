#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ebcommit/channels.hpp"
#include "ebcommit/states.hpp"

namespace ebc {

/// EPR attack: Alice sends Bob the second qubit of |a0>|0> + |a1>|1> and later
/// steers by measuring the first.
struct CheatStrategy {
  StateVector a0 = StateVector::basis(2, 0);
  StateVector a1 = StateVector::basis(2, 1);
  /// Points per axis of the (theta, phi) search over steering bases.
  std::size_t steer_grid = 64;

  /// a0 = |0>, a1 = |1>: Bob receives half of |psi+>.
  static CheatStrategy bell(std::size_t steer_grid = 64);

  /// Throws std::invalid_argument when amplitudes are not qubits or the grid is < 2.
  void validate() const;

  friend bool operator==(const CheatStrategy&, const CheatStrategy&) = default;
};

struct HidingReport {
  double delta_raw = 0.0;
  double delta_channel = 0.0;
  double p_bcheat = 0.5;
};

/// Bob's best guess probability 1/2 + max(D(s0, s1), D(S[s0], S[s1])) / 2.
HidingReport bob_cheat_probability(const DensityMatrix& sigma0, const DensityMatrix& sigma1,
                                   const KrausChannel& channel);

struct SteeringPoint {
  ProjectiveBasis basis;
  /// sum_j p_j max(F^2(cond_j, target), F^2(cond_j, I - target))
  double fidelity_sq = 0.0;
  /// max |sum_j p_j cond_j - Tr_A(rho)| entrywise.
  double no_signalling_residual = 0.0;
};

struct BindingReport {
  ProjectiveBasis best_basis;
  double best_fidelity_sq = 0.0;
  /// Row-major over (theta index, phi index).
  std::vector<SteeringPoint> fidelity_grid;

  double min_fidelity_sq() const;
  double max_no_signalling_residual() const;
};

/// theta_i = pi i / (n - 1), phi_k = 2 pi k / n, row-major in (i, k).
std::vector<ProjectiveBasis> steering_grid(std::size_t resolution);

/// Objective for one steering basis, as stored in BindingReport::fidelity_grid.
///
/// After seeing outcome j Alice may announce either the target or its
/// complement I - target (the other state of the same bit), whichever Bob's
/// conditional state is closer to.
SteeringPoint evaluate_steering(const DensityMatrix& joint_after_channel,
                                const ProjectiveBasis& basis, const DensityMatrix& target);

/// Exhaustive steering search. Ties keep the lowest grid index.
BindingReport alice_binding_attack(const CheatStrategy& strategy,
                                   const DepolarizingChannel& channel,
                                   const DensityMatrix& target);

struct BindingCurvePoint {
  double q = 0.0;
  double best_fidelity_sq = 0.0;
  ProjectiveBasis best_basis;
  double max_no_signalling_residual = 0.0;
};

std::vector<BindingCurvePoint> binding_curve(const CheatStrategy& strategy,
                                             std::span<const double> q_grid,
                                             const DensityMatrix& target);

}  // namespace ebc
