#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ebcommit/channels.hpp"
#include "ebcommit/security.hpp"
#include "ebcommit/states.hpp"
#include "test_support.hpp"

using namespace ebc;

namespace {

const DensityMatrix kZero = DensityMatrix::pure(StateVector::basis(2, 0));
const DensityMatrix kOne = DensityMatrix::pure(StateVector::basis(2, 1));

// Joint state the Bell strategy leaves behind after Bob's channel.
DensityMatrix bell_joint(double q) {
  return lift_apply(DepolarizingChannel(q), DensityMatrix::pure(bell_psi_plus()));
}

}  // namespace

TEST_CASE("hiding") {
  for (double q : {0.0, 0.3, 1.0}) {
    const auto r = bob_cheat_probability(bb84_bit_average(0), bb84_bit_average(1),
                                         as_kraus(DepolarizingChannel(q)));
    CHECK(r.delta_raw <= 1e-12);
    CHECK(r.delta_channel <= 1e-12);
    CHECK(r.p_bcheat == 0.5);
  }

  const auto noiseless = bob_cheat_probability(kZero, kOne, KrausChannel::identity());
  CHECK(std::abs(noiseless.p_bcheat - 1.0) <= 1e-12);

  for (double q : {0.0, 0.25, 0.5, 0.9}) {
    const auto r = bob_cheat_probability(kZero, kOne, as_kraus(DepolarizingChannel(q)));
    // eps(|0><0|) - eps(|1><1|) = q sigma_z.
    CHECK(std::abs(r.delta_channel - q) <= 1e-12);
    CHECK(std::abs(r.delta_raw - 1.0) <= 1e-12);
    CHECK(std::abs(r.p_bcheat - 1.0) <= 1e-12);
  }

  SUBCASE("channel never helps Bob") {
    std::mt19937_64 gen(51);
    for (int trial = 0; trial < 200; ++trial) {
      const DensityMatrix s0 = testing::random_density(gen, 2);
      const DensityMatrix s1 = testing::random_density(gen, 2);
      const double q = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
      const auto r = bob_cheat_probability(s0, s1, as_kraus(DepolarizingChannel(q)));
      CHECK(r.delta_channel <= r.delta_raw + 1e-12);
      CHECK(std::abs(r.delta_channel - q * r.delta_raw) <= 1e-12);
      CHECK(std::abs(r.p_bcheat - (0.5 + r.delta_raw / 2)) <= 1e-12);
    }
  }
}

TEST_CASE("steering grid") {
  const auto grid = steering_grid(4);
  REQUIRE(grid.size() == 16);
  CHECK(grid[0].theta() == 0.0);
  CHECK(grid[15].theta() == std::numbers::pi);
  CHECK(std::abs(grid[1].phi() - std::numbers::pi / 2) <= 1e-15);
  CHECK(std::abs(grid[4].theta() - std::numbers::pi / 3) <= 1e-15);
  CHECK_THROWS_AS(steering_grid(1), std::invalid_argument);
}

TEST_CASE("binding attack endpoints") {
  const CheatStrategy bell = CheatStrategy::bell(16);

  const auto flat = alice_binding_attack(bell, DepolarizingChannel(0.0), kZero);
  CHECK(std::abs(flat.best_fidelity_sq - 0.5) <= 1e-10);
  CHECK(std::abs(flat.min_fidelity_sq() - 0.5) <= 1e-10);
  CHECK(flat.fidelity_grid.size() == 256);

  const auto perfect = alice_binding_attack(bell, DepolarizingChannel(1.0), kZero);
  CHECK(std::abs(perfect.best_fidelity_sq - 1.0) <= 1e-9);
  // The computational basis is on the grid and achieves the optimum first.
  CHECK(perfect.best_basis.theta() == 0.0);

  // Diagonal target: steering along the x axis is optimal.
  const DensityMatrix plus = DensityMatrix::pure(bb84_state({1, 0}));
  const auto diag = alice_binding_attack(CheatStrategy::bell(17), DepolarizingChannel(1.0), plus);
  CHECK(std::abs(diag.best_fidelity_sq - 1.0) <= 1e-9);
}

TEST_CASE("binding objective against hand evaluation") {
  // Bell state through eps_q, steering in a basis at polar angle theta relative
  // to the target axis z: F^2 = 1/2 + q |cos theta| / 2.
  for (double q : {0.0, 0.2, 0.6, 1.0}) {
    const DensityMatrix joint = bell_joint(q);
    for (double theta : {0.0, 0.4, 1.0, std::numbers::pi / 2, 2.5}) {
      const ProjectiveBasis basis(theta, 0.7);
      const SteeringPoint p = evaluate_steering(joint, basis, kZero);
      CHECK(std::abs(p.fidelity_sq - (0.5 + q * std::abs(std::cos(theta)) / 2)) <= 1e-10);
      CHECK(p.no_signalling_residual <= 1e-12);
    }
  }
}

TEST_CASE("binding curve") {
  std::vector<double> q_grid;
  for (int k = 0; k <= 10; ++k) q_grid.push_back(k / 10.0);
  const auto curve = binding_curve(CheatStrategy::bell(24), q_grid, kZero);
  REQUIRE(curve.size() == q_grid.size());
  CHECK(std::abs(curve.front().best_fidelity_sq - 0.5) <= 1e-9);
  CHECK(std::abs(curve.back().best_fidelity_sq - 1.0) <= 1e-9);
  for (std::size_t k = 0; k < curve.size(); ++k) {
    CHECK(curve[k].q == q_grid[k]);
    CHECK(std::abs(curve[k].best_fidelity_sq - (1 + q_grid[k]) / 2) <= 1e-9);
    CHECK(curve[k].max_no_signalling_residual <= 1e-10);
    if (k > 0) CHECK(curve[k].best_fidelity_sq >= curve[k - 1].best_fidelity_sq - 1e-12);
  }
  // Strictly below the noiseless value once the state is separable.
  CHECK(curve[3].best_fidelity_sq < curve.back().best_fidelity_sq);
}

TEST_CASE("no-signalling holds for arbitrary strategies") {
  std::mt19937_64 gen(52);
  for (int trial = 0; trial < 20; ++trial) {
    CheatStrategy s;
    s.a0 = testing::random_pure(gen, 2);
    s.a1 = testing::random_pure(gen, 2);
    s.steer_grid = 8;
    for (double q : {0.1, 1.0 / 3.0, 0.8}) {
      const auto report =
          alice_binding_attack(s, DepolarizingChannel(q), testing::random_density(gen, 2));
      CHECK(report.max_no_signalling_residual() <= 1e-10);
      CHECK(report.best_fidelity_sq <= 1.0 + 1e-12);
      CHECK(report.min_fidelity_sq() >= 0.0);
    }
  }

  CheatStrategy bad;
  bad.steer_grid = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.steer_grid = 8;
  bad.a0 = StateVector::basis(4, 0);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
