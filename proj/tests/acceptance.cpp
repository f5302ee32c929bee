// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <fmt/core.h>

#include "ebcommit/channels.hpp"
#include "ebcommit/entanglement.hpp"
#include "ebcommit/protocol.hpp"
#include "ebcommit/security.hpp"
#include "ebcommit/states.hpp"
#include "test_support.hpp"

using namespace ebc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  std::string timing = fmt::format("{:.3f} s", elapsed);
  if (budget_s > 0) {
    timing += fmt::format(" (limit {} s)", budget_s);
    if (elapsed >= budget_s) o.pass = false;
  }
  if (!o.pass) ++failures;
  std::cout << fmt::format("{} [{}] {}: {}; {}\n", o.pass ? "PASS" : "FAIL", id, name, o.detail,
                           timing)
            << std::flush;
}

DensityMatrix bell_pair() { return DensityMatrix::pure(bell_psi_plus()); }

// Both halves of criterion 7 compare raw bytes from separate processes.
struct Captured {
  int code = -1;
  std::string out;
};

Captured capture(const std::string& args) {
  Captured c;
  const std::string cmd = std::string("\"") + EBCOMMIT_TOOL + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return c;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) c.out.append(buf, n);
  const int status = pclose(pipe);
  c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

Outcome separability_threshold() {
  const double q_star = eb_threshold(depolarizing_family(), 0.0, 1.0, 1e-9);
  const double err = std::abs(q_star - 1.0 / 3.0);
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double q = k / 100.0;
    worst = std::max(worst, std::abs(min_partial_transpose_eigenvalue(isotropic(q)) - (1 - 3 * q) / 4));
  }
  return {err <= 1e-9 && worst <= 1e-10,
          fmt::format("q*={:.12f} |q*-1/3|={:.2e} (tol 1e-9), max PT eigen dev={:.2e} over 101 q (tol "
                      "1e-10)",
                      q_star, err, worst)};
}

Outcome factorization_law() {
  std::mt19937_64 gen(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const StateVector x = testing::random_pure(gen, 4);
    for (int k = 0; k <= 10; ++k) {
      const double q = k / 10.0;
      const double lhs = concurrence(lift_apply(DepolarizingChannel(q), DensityMatrix::pure(x))).value;
      const double rhs = concurrence(DensityMatrix::pure(x)).value * concurrence(isotropic(q)).value;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return {worst <= 1e-9, fmt::format("max residual {:.2e} over 200 states x 11 q (tol 1e-9)", worst)};
}

Outcome disentangling() {
  std::mt19937_64 gen(7);
  double worst_c = 0.0;
  double worst_pt = 0.0;
  bool all_ppt = true;
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix joint =
        cheat_state(testing::random_pure(gen, 2), testing::random_pure(gen, 2));
    for (double q : {0.1, 0.2, 0.3, 1.0 / 3.0}) {
      const DensityMatrix out = lift_apply(DepolarizingChannel(q), joint);
      worst_c = std::max(worst_c, concurrence(out).value);
      worst_pt = std::min(worst_pt, min_partial_transpose_eigenvalue(out));
      all_ppt = all_ppt && is_separable(out, 1e-10);
    }
  }
  double worst_bell = 0.0;
  for (double q : {0.4, 0.7, 1.0}) {
    const double c = concurrence(lift_apply(DepolarizingChannel(q), bell_pair())).value;
    worst_bell = std::max(worst_bell, std::abs(c - (3 * q - 1) / 2));
  }
  return {worst_c <= 1e-10 && all_ppt && worst_bell <= 1e-9,
          fmt::format("q<=1/3: max C={:.2e} (tol 1e-10), min PT eig={:.2e}, PPT {}; q in "
                      "{{0.4,0.7,1}}: max |C-(3q-1)/2|={:.2e} (tol 1e-9)",
                      worst_c, worst_pt, all_ppt ? "yes" : "no", worst_bell)};
}

Outcome honest_statistics() {
  std::string detail;
  bool pass = true;
  for (double q : {0.2, 0.5, 0.8}) {
    for (int bit : {0, 1}) {
      ProtocolConfig config;
      config.q = q;
      config.rounds = 100000;
      config.seed = 1;  // trials use seeds 1..20
      const auto mc = monte_carlo(config, Scenario{}, bit, 20);
      const double e = (1 + q) / 2;
      int within = 0;
      int above_bound = 0;
      for (const auto& t : mc.trials) {
        const double n = static_cast<double>(t.report.sifted_count);
        const double sigma = std::sqrt(e * (1 - e) / n);
        within += std::abs(t.report.match_fraction - e) <= 3 * sigma;
        above_bound += t.report.match_fraction >= q / 2;
      }
      pass = pass && within >= 19 && above_bound == 20;
      detail += fmt::format("{}q={} bit={}: {}/20 within 3sigma, {}/20 >= q/2",
                            detail.empty() ? "" : "; ", q, bit, within, above_bound);
    }
  }
  return {pass, detail};
}

Outcome perfect_hiding() {
  bool pass = true;
  double worst = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const auto r = bob_cheat_probability(bb84_bit_average(0), bb84_bit_average(1),
                                         as_kraus(DepolarizingChannel(k / 10.0)));
    worst = std::max({worst, r.delta_raw, r.delta_channel});
    pass = pass && r.p_bcheat == 0.5 && r.delta_raw <= 1e-12 && r.delta_channel <= 1e-12;
  }
  return {pass, fmt::format("p_bcheat == 1/2 on 11 q values, max delta {:.2e} (tol 1e-12)", worst)};
}

Outcome binding_endpoints() {
  const CheatStrategy bell = CheatStrategy::bell();
  const DensityMatrix target = DensityMatrix::pure(StateVector::basis(2, 0));
  const double f0 = alice_binding_attack(bell, DepolarizingChannel(0.0), target).best_fidelity_sq;
  const double f1 = alice_binding_attack(bell, DepolarizingChannel(1.0), target).best_fidelity_sq;

  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  const auto curve = binding_curve(bell, grid, target);
  bool monotone = true;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    monotone = monotone && curve[k].best_fidelity_sq >= curve[k - 1].best_fidelity_sq;
  }

  double residual = 0.0;
  for (const auto& p : curve) {
    if (p.q <= 1.0 / 3.0) residual = std::max(residual, p.max_no_signalling_residual);
  }
  residual = std::max(residual, alice_binding_attack(bell, DepolarizingChannel(1.0 / 3.0), target)
                                    .max_no_signalling_residual());

  const bool pass = std::abs(f0 - 0.5) <= 1e-9 && std::abs(f1 - 1.0) <= 1e-9 && monotone &&
                    residual <= 1e-10;
  return {pass, fmt::format("F2(q=0)={:.12f}, F2(q=1)={:.12f} (tol 1e-9), nondecreasing on 11 q: {}, "
                            "no-signalling residual at q<=1/3 {:.2e} over 64x64 bases (tol 1e-10)",
                            f0, f1, monotone ? "yes" : "no", residual)};
}

Outcome determinism() {
  const std::vector<std::string> commands = {
      "run --q 0.6 --rounds 20000 --bit 1 --seed 11",
      "run --q 0.6 --rounds 2000 --alice epr --target-bit 0 --bit 1 --seed 11 --dump-transcript",
      "sweep --q-steps 6 --rounds 2000 --trials 8",
      "sweep --q-steps 6 --rounds 2000 --trials 8 --alice epr",
      "threshold",
      "hiding --states bb84 --q 0.3",
      "binding --q-grid 0,0.3,0.6,1 --grid 16",
  };
  int identical = 0;
  int total = 0;
  for (const auto& c : commands) {
    for (const char* format : {"csv", "json"}) {
      const std::string args = c + " --format " + format;
      const auto a = capture(args);
      const auto b = capture(args);
      ++total;
      identical += a.code == b.code && !a.out.empty() && a.out == b.out;
    }
  }
  // The sweep output must not move with the worker count either.
  const auto serial_cli = capture("sweep --q-steps 4 --rounds 2000 --trials 8 --threads 1 --format json");
  const auto parallel_cli = capture("sweep --q-steps 4 --rounds 2000 --trials 8 --threads 6 --format json");
  const bool cli_threads = !serial_cli.out.empty() && serial_cli.out == parallel_cli.out;

  ProtocolConfig config;
  config.q = 0.45;
  config.rounds = 5000;
  config.seed = 99;
  Scenario epr;
  epr.alice = AliceKind::Epr;
  bool mc_equal = true;
  for (const Scenario& s : {Scenario{}, epr}) {
    const auto one = monte_carlo(config, s, 0, 24, 1);
    for (unsigned threads : {2u, 3u, 8u}) {
      const auto many = monte_carlo(config, s, 0, 24, threads);
      mc_equal = mc_equal && one.trials == many.trials &&
                 one.match_fraction_mean == many.match_fraction_mean &&
                 one.match_fraction_std == many.match_fraction_std &&
                 one.acceptance_rate == many.acceptance_rate &&
                 one.separable_fraction == many.separable_fraction &&
                 one.mean_concurrence == many.mean_concurrence;
    }
  }
  return {identical == total && cli_threads && mc_equal,
          fmt::format("{}/{} CLI invocations byte-identical, sweep 1 vs 6 threads identical: {}, "
                      "monte_carlo 1 vs 2/3/8 threads identical: {}",
                      identical, total, cli_threads ? "yes" : "no", mc_equal ? "yes" : "no")};
}

Outcome numerical_core() {
  std::mt19937_64 gen(8);
  double worst_recon = 0.0;
  double worst_fvdg = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = trial % 2 == 0 ? 2 : 4;
    const DensityMatrix a = testing::random_density(gen, dim);
    const DensityMatrix b = trial % 5 == 0 ? DensityMatrix::pure(testing::random_pure(gen, dim))
                                           : testing::random_density(gen, dim);
    for (const DensityMatrix* m : {&a, &b}) {
      const auto e = eig_hermitian(m->matrix(), true);
      const ComplexMatrix& v = *e.vectors;
      ComplexMatrix d(dim);
      for (std::size_t k = 0; k < dim; ++k) d(k, k) = e.values[k];
      worst_recon = std::max(worst_recon, max_abs_diff(v * d * v.adjoint(), m->matrix()));
    }
    const double f = fidelity(a, b);
    const double t = trace_distance(a, b);
    worst_fvdg = std::max({worst_fvdg, (1 - f) - t, t - std::sqrt(std::max(0.0, 1 - f * f))});
  }
  return {worst_recon <= 1e-10 && worst_fvdg <= 1e-9,
          fmt::format("max reconstruction residual {:.2e} (tol 1e-10), max Fuchs-van de Graaf "
                      "violation {:.2e} (tol 1e-9) over 1000 pairs",
                      worst_recon, worst_fvdg)};
}

}  // namespace

int main() {
  report(1, "separability threshold", 1.0, separability_threshold);
  report(2, "factorization law", 5.0, factorization_law);
  report(3, "disentangling", 0.0, disentangling);
  report(4, "honest statistics", 30.0, honest_statistics);
  report(5, "perfect hiding", 0.0, perfect_hiding);
  report(6, "binding curve endpoints", 0.0, binding_endpoints);
  report(7, "determinism", 0.0, determinism);
  report(8, "numerical core", 0.0, numerical_core);
  std::cout << fmt::format("{} of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
