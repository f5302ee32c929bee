#pragma once

#include <array>
#include <functional>

#include "ebcommit/channels.hpp"
#include "ebcommit/qmat.hpp"

namespace ebc {

struct ConcurrenceResult {
  double value = 0.0;
  /// Square roots of the spin-flip spectrum, sorted descending.
  std::array<double, 4> lambdas{};
};

/// Wootters concurrence of a two-qubit state.
ConcurrenceResult concurrence(const DensityMatrix& rho);

/// PPT decision, exact for two qubits: min eig of rho^{T_B} >= -tol.
bool is_separable(const DensityMatrix& rho, double tol = 1e-10);

/// Smallest eigenvalue of the partial transpose over subsystem B.
double min_partial_transpose_eigenvalue(const DensityMatrix& rho);

/// |C((I (x) S)[x]) - C(x) C(choi(S))|; both sides are computed independently.
double factorization_residual(const StateVector& x, const KrausChannel& channel);

/// Maps a noise parameter to a channel; used for threshold searches.
using ChannelFamily = std::function<KrausChannel(double)>;

/// The depolarizing family q -> as_kraus(DepolarizingChannel(q)).
ChannelFamily depolarizing_family();

/// Bisects the entanglement-breaking boundary of `family` between lo and hi.
///
/// The classification must differ at the two ends; otherwise std::domain_error.
/// Returns the midpoint of the final bracket, whose width is at most `width`.
double eb_threshold(const ChannelFamily& family, double lo, double hi, double width = 1e-9,
                    double ppt_tol = 1e-10);

}  // namespace ebc
