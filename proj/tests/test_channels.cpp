#include <doctest.h>

#include <cmath>

#include "ebcommit/channels.hpp"
#include "ebcommit/entanglement.hpp"
#include "ebcommit/states.hpp"
#include "test_support.hpp"

using namespace ebc;

namespace {

// Independent oracle for I (x) K: build the 4x4 operators explicitly.
ComplexMatrix lift_by_kron(const KrausChannel& c, const ComplexMatrix& rho) {
  ComplexMatrix out(4);
  for (const auto& k : c.ops()) {
    const ComplexMatrix big = kron(ComplexMatrix::identity(2), k);
    out += big * rho * big.adjoint();
  }
  return out;
}

const double kQGrid[] = {0.0, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.75, 0.9, 1.0};

}  // namespace

TEST_CASE("depolarize_apply") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = testing::random_density(gen, 2);
    CHECK(max_abs_diff(depolarize_apply(DepolarizingChannel(1.0), rho).matrix(), rho.matrix()) <=
          1e-15);
    CHECK(max_abs_diff(depolarize_apply(DepolarizingChannel(0.0), rho).matrix(),
                       ComplexMatrix::identity(2) * 0.5) <= 1e-15);
  }
  const DensityMatrix zero = DensityMatrix::pure(StateVector::basis(2, 0));
  for (double q : kQGrid) {
    const auto out = depolarize_apply(DepolarizingChannel(q), zero).matrix();
    CHECK(max_abs_diff(out, ComplexMatrix::diagonal({(1 + q) / 2, (1 - q) / 2})) <= 1e-15);
  }
  // Linear on non-states too: trace-zero input is scaled by q.
  const ComplexMatrix z = pauli::z();
  CHECK(max_abs_diff(depolarize_apply(DepolarizingChannel(0.3), z), z * 0.3) <= 1e-15);

  CHECK_THROWS_AS(DepolarizingChannel(-1e-3), std::invalid_argument);
  CHECK_THROWS_AS(DepolarizingChannel(1.5), std::invalid_argument);
  CHECK_THROWS_AS(depolarize_apply(DepolarizingChannel(0.5), ComplexMatrix::identity(4)),
                  DimensionError);
}

TEST_CASE("as_kraus") {
  CHECK(as_kraus(DepolarizingChannel(1.0)).ops().size() == 1);
  CHECK(as_kraus(DepolarizingChannel(1.0)).ops()[0] == ComplexMatrix::identity(2));

  const auto full = as_kraus(DepolarizingChannel(0.0)).ops();
  REQUIRE(full.size() == 4);
  CHECK(max_abs_diff(full[0], pauli::identity() * 0.5) <= 1e-15);
  CHECK(max_abs_diff(full[1], pauli::x() * 0.5) <= 1e-15);
  CHECK(max_abs_diff(full[2], pauli::y() * 0.5) <= 1e-15);
  CHECK(max_abs_diff(full[3], pauli::z() * 0.5) <= 1e-15);

  std::mt19937_64 gen(32);
  for (double q : kQGrid) {
    const DepolarizingChannel c(q);
    const KrausChannel k = as_kraus(c);
    ComplexMatrix completeness(2);
    for (const auto& op : k.ops()) completeness += op.adjoint() * op;
    CHECK(max_abs_diff(completeness, ComplexMatrix::identity(2)) <= 1e-14);
    for (int trial = 0; trial < 100; ++trial) {
      const DensityMatrix rho = testing::random_density(gen, 2);
      CHECK(max_abs_diff(k.apply(rho).matrix(), depolarize_apply(c, rho).matrix()) <= 1e-12);
    }
  }
}

TEST_CASE("KrausChannel validation") {
  CHECK_THROWS_AS(KrausChannel({pauli::identity() * 0.9}), std::invalid_argument);
  CHECK_THROWS_AS(KrausChannel({}), std::invalid_argument);
  CHECK_THROWS_AS(KrausChannel({ComplexMatrix::identity(4)}), DimensionError);
  // Amplitude damping is a valid non-unital channel.
  const double g = 0.3;
  const KrausChannel damping({ComplexMatrix(2, {1, 0, 0, std::sqrt(1 - g)}),
                              ComplexMatrix(2, {0, std::sqrt(g), 0, 0})});
  const DensityMatrix one = DensityMatrix::pure(StateVector::basis(2, 1));
  CHECK(max_abs_diff(damping.apply(one).matrix(), ComplexMatrix::diagonal({g, 1 - g})) <= 1e-15);
}

TEST_CASE("lift_apply") {
  const DensityMatrix bell = DensityMatrix::pure(bell_psi_plus());
  for (double q : kQGrid) {
    const DepolarizingChannel c(q);
    CHECK(max_abs_diff(lift_apply(c, bell).matrix(), isotropic(q).matrix()) <= 1e-15);
    CHECK(max_abs_diff(lift_apply(as_kraus(c), bell).matrix(), isotropic(q).matrix()) <= 1e-14);
  }

  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix rho = testing::random_density(gen, 4);
    const double q = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
    const DepolarizingChannel c(q);
    const DensityMatrix closed = lift_apply(c, rho);
    const DensityMatrix kraus = lift_apply(as_kraus(c), rho);
    CHECK(max_abs_diff(closed.matrix(), kraus.matrix()) <= 1e-12);
    CHECK(max_abs_diff(kraus.matrix(), lift_by_kron(as_kraus(c), rho.matrix())) <= 1e-12);
    // Only Bob's qubit is touched.
    CHECK(max_abs_diff(partial_trace(closed, Subsystem::A).matrix(),
                       partial_trace(rho, Subsystem::A).matrix()) <= 1e-12);
    CHECK(max_abs_diff(lift_apply(DepolarizingChannel(1.0), rho).matrix(), rho.matrix()) <= 1e-15);

    const DensityMatrix a = testing::random_density(gen, 2);
    const DensityMatrix b = testing::random_density(gen, 2);
    const DensityMatrix product(kron(a.matrix(), b.matrix()));
    CHECK(max_abs_diff(lift_apply(c, product).matrix(),
                       kron(a.matrix(), depolarize_apply(c, b).matrix())) <= 1e-12);
  }

  CHECK_THROWS_AS(lift_apply(DepolarizingChannel(0.5), DensityMatrix::maximally_mixed(2)),
                  DimensionError);
}

TEST_CASE("choi and entanglement breaking") {
  CHECK(max_abs_diff(choi(KrausChannel::identity()).matrix(), bell_psi_plus().projector()) <=
        1e-15);
  CHECK(max_abs_diff(choi(as_kraus(DepolarizingChannel(0.0))).matrix(),
                     ComplexMatrix::identity(4) * 0.25) <= 1e-15);
  for (double q : kQGrid) {
    CHECK(max_abs_diff(choi(as_kraus(DepolarizingChannel(q))).matrix(), isotropic(q).matrix()) <=
          1e-14);
  }

  CHECK(is_entanglement_breaking(as_kraus(DepolarizingChannel(0.3))));
  CHECK_FALSE(is_entanglement_breaking(as_kraus(DepolarizingChannel(0.4))));
  CHECK(is_entanglement_breaking(as_kraus(DepolarizingChannel(1.0 / 3.0))));
  CHECK_FALSE(is_entanglement_breaking(KrausChannel::identity()));

  // Exactly one classification change on a fine grid, at 1/3.
  int flips = 0;
  bool previous = true;
  for (int k = 0; k <= 300; ++k) {
    const double q = k / 300.0;
    const bool eb = is_entanglement_breaking(as_kraus(DepolarizingChannel(q)));
    CHECK(eb == (k <= 100));
    if (k > 0 && eb != previous) ++flips;
    previous = eb;
  }
  CHECK(flips == 1);
}

TEST_CASE("noise location") {
  CHECK(parse_noise_location("bob") == NoiseLocation::BobApparatus);
  CHECK(parse_noise_location("channel") == NoiseLocation::TransmissionChannel);
  CHECK(to_string(NoiseLocation::BobApparatus) == "bob");
  CHECK(to_string(NoiseLocation::TransmissionChannel) == "channel");
  CHECK_THROWS_AS(parse_noise_location("elsewhere"), std::invalid_argument);
}
