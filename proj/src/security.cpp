#include "ebcommit/security.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ebc {

CheatStrategy CheatStrategy::bell(std::size_t steer_grid) {
  CheatStrategy s;
  s.steer_grid = steer_grid;
  return s;
}

void CheatStrategy::validate() const {
  if (a0.dim() != 2 || a1.dim() != 2) {
    throw std::invalid_argument("CheatStrategy: a0 and a1 must be qubit states");
  }
  if (steer_grid < 2) throw std::invalid_argument("CheatStrategy: steer_grid must be >= 2");
}

HidingReport bob_cheat_probability(const DensityMatrix& sigma0, const DensityMatrix& sigma1,
                                   const KrausChannel& channel) {
  HidingReport r;
  r.delta_raw = trace_distance(sigma0, sigma1);
  r.delta_channel = trace_distance(channel.apply(sigma0), channel.apply(sigma1));
  r.p_bcheat = 0.5 + std::max(r.delta_raw / 2.0, r.delta_channel / 2.0);
  return r;
}

double BindingReport::min_fidelity_sq() const {
  double m = 1.0;
  for (const auto& p : fidelity_grid) m = std::min(m, p.fidelity_sq);
  return m;
}

double BindingReport::max_no_signalling_residual() const {
  double m = 0.0;
  for (const auto& p : fidelity_grid) m = std::max(m, p.no_signalling_residual);
  return m;
}

std::vector<ProjectiveBasis> steering_grid(std::size_t resolution) {
  if (resolution < 2) throw std::invalid_argument("steering_grid: resolution must be >= 2");
  std::vector<ProjectiveBasis> grid;
  grid.reserve(resolution * resolution);
  const double n = static_cast<double>(resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double theta = i + 1 == resolution ? std::numbers::pi
                                             : std::numbers::pi * static_cast<double>(i) / (n - 1.0);
    for (std::size_t k = 0; k < resolution; ++k) {
      grid.emplace_back(theta, 2.0 * std::numbers::pi * static_cast<double>(k) / n);
    }
  }
  return grid;
}

SteeringPoint evaluate_steering(const DensityMatrix& joint_after_channel,
                                const ProjectiveBasis& basis, const DensityMatrix& target) {
  if (target.dim() != 2) throw DimensionError("evaluate_steering: target must be a qubit state");
  const ComplexMatrix complement = ComplexMatrix::identity(2) - target.matrix();

  SteeringPoint point{basis, 0.0, 0.0};
  ComplexMatrix averaged(2);
  for (int outcome = 0; outcome < 2; ++outcome) {
    const ConditionalState cond = conditional_state(joint_after_channel, Subsystem::A, basis, outcome);
    if (!cond.state) continue;
    const ComplexMatrix& bob = cond.state->matrix();
    const double f_target = std::pow(fidelity(bob, target.matrix()), 2);
    const double f_complement = std::pow(fidelity(bob, complement), 2);
    point.fidelity_sq += cond.probability * std::max(f_target, f_complement);
    averaged += cond.probability * bob;
  }
  const ComplexMatrix marginal = partial_trace(joint_after_channel.matrix(), Subsystem::B);
  point.no_signalling_residual = max_abs_diff(averaged, marginal);
  return point;
}

BindingReport alice_binding_attack(const CheatStrategy& strategy,
                                   const DepolarizingChannel& channel,
                                   const DensityMatrix& target) {
  strategy.validate();
  const DensityMatrix joint = lift_apply(channel, cheat_state(strategy.a0, strategy.a1));

  BindingReport report;
  const auto grid = steering_grid(strategy.steer_grid);
  report.fidelity_grid.reserve(grid.size());
  std::size_t best = 0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    report.fidelity_grid.push_back(evaluate_steering(joint, grid[idx], target));
    if (report.fidelity_grid[idx].fidelity_sq > report.fidelity_grid[best].fidelity_sq) best = idx;
  }
  report.best_basis = report.fidelity_grid[best].basis;
  report.best_fidelity_sq = report.fidelity_grid[best].fidelity_sq;
  return report;
}

std::vector<BindingCurvePoint> binding_curve(const CheatStrategy& strategy,
                                             std::span<const double> q_grid,
                                             const DensityMatrix& target) {
  std::vector<BindingCurvePoint> curve;
  curve.reserve(q_grid.size());
  for (double q : q_grid) {
    const BindingReport r = alice_binding_attack(strategy, DepolarizingChannel(q), target);
    curve.push_back({q, r.best_fidelity_sq, r.best_basis, r.max_no_signalling_residual()});
  }
  return curve;
}

}  // namespace ebc
