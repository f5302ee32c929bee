// Python view of the simulator. Matrices cross the boundary as complex128 numpy arrays.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ebcommit/channels.hpp"
#include "ebcommit/cli.hpp"
#include "ebcommit/entanglement.hpp"
#include "ebcommit/protocol.hpp"
#include "ebcommit/security.hpp"
#include "ebcommit/states.hpp"

namespace py = pybind11;
using namespace ebc;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw DimensionError("expected a square matrix");
  const auto n = static_cast<std::size_t>(a.shape(0));
  if (n < 1 || n > ComplexMatrix::kMaxDim) throw DimensionError("matrix dimension must be 1..4");
  ComplexMatrix m(n);
  auto view = a.unchecked<2>();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = view(i, j);
  return m;
}

DensityMatrix to_density(const CArray& a) { return DensityMatrix(to_matrix(a)); }

StateVector to_state(const CArray& a) {
  if (a.ndim() != 1) throw DimensionError("expected a state vector");
  return StateVector::normalized(std::span<const cplx>(a.data(), static_cast<std::size_t>(a.shape(0))));
}

py::array_t<cplx> to_array(const ComplexMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.dim());
  py::array_t<cplx> out({n, n});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t j = 0; j < n; ++j) view(i, j) = m(i, j);
  return out;
}

py::array_t<cplx> to_array(const StateVector& v) {
  py::array_t<cplx> out(static_cast<py::ssize_t>(v.dim()));
  for (std::size_t i = 0; i < v.dim(); ++i) out.mutable_at(i) = v[i];
  return out;
}

Subsystem parse_side(const std::string& side) {
  if (side == "A") return Subsystem::A;
  if (side == "B") return Subsystem::B;
  throw std::invalid_argument("subsystem must be 'A' or 'B'");
}

AliceKind parse_alice(const std::string& kind) {
  if (kind == "honest") return AliceKind::Honest;
  if (kind == "epr") return AliceKind::Epr;
  throw std::invalid_argument("alice must be 'honest' or 'epr'");
}

py::dict report_dict(const VerificationReport& r) {
  py::dict d;
  d["sifted_count"] = r.sifted_count;
  d["match_count"] = r.match_count;
  d["match_fraction"] = r.match_fraction;
  d["expected_fraction"] = r.expected_fraction;
  d["threshold"] = r.threshold;
  d["accepted"] = r.accepted;
  d["no_sifted_rounds"] = r.no_sifted_rounds;
  return d;
}

ProtocolConfig make_config(double q, std::uint64_t rounds, std::uint64_t seed, double accept_sigma) {
  ProtocolConfig c;
  c.q = q;
  c.rounds = rounds;
  c.seed = seed;
  c.accept_sigma = accept_sigma;
  return c;
}

Scenario make_scenario(const std::string& alice, std::optional<int> target_bit) {
  Scenario s;
  s.alice = parse_alice(alice);
  s.target_bit = target_bit;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entanglement-breaking channel bit commitment simulator";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<InvalidStateError>(m, "InvalidStateError", PyExc_ValueError);
  py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);

  // states
  m.def("bb84_state", [](int bit, int variant) { return to_array(bb84_state({bit, variant})); },
        py::arg("bit"), py::arg("variant"));
  m.def("bell_psi_plus", [] { return to_array(bell_psi_plus()); });
  m.def("isotropic", [](double q) { return to_array(isotropic(q).matrix()); }, py::arg("q"));
  m.def("cheat_state",
        [](const CArray& a0, const CArray& a1) {
          return to_array(cheat_state(to_state(a0), to_state(a1)).matrix());
        },
        py::arg("a0"), py::arg("a1"));

  // linear algebra
  m.def("eigvalsh", [](const CArray& a) { return eigenvalues_hermitian(to_matrix(a)); },
        "Eigenvalues of a Hermitian matrix, descending.");
  m.def("partial_trace",
        [](const CArray& rho, const std::string& keep) {
          return to_array(partial_trace(to_matrix(rho), parse_side(keep)));
        },
        py::arg("rho"), py::arg("keep"));
  m.def("partial_transpose",
        [](const CArray& rho, const std::string& on) {
          return to_array(partial_transpose(to_matrix(rho), parse_side(on)));
        },
        py::arg("rho"), py::arg("on") = "B");
  m.def("trace_distance",
        [](const CArray& a, const CArray& b) { return trace_distance(to_density(a), to_density(b)); });
  m.def("fidelity", [](const CArray& a, const CArray& b) { return fidelity(to_density(a), to_density(b)); });

  // channels and entanglement
  m.def("depolarize",
        [](const CArray& rho, double q) {
          return to_array(depolarize_apply(DepolarizingChannel(q), to_matrix(rho)));
        },
        py::arg("rho"), py::arg("q"));
  m.def("lift_depolarize",
        [](const CArray& rho, double q) {
          return to_array(lift_apply(DepolarizingChannel(q), to_density(rho)).matrix());
        },
        py::arg("rho"), py::arg("q"), "Depolarizing noise on the second qubit of a two-qubit state.");
  m.def("is_entanglement_breaking",
        [](double q, double tol) { return is_entanglement_breaking(as_kraus(DepolarizingChannel(q)), tol); },
        py::arg("q"), py::arg("tol") = 1e-10);
  m.def("concurrence", [](const CArray& rho) { return concurrence(to_density(rho)).value; });
  m.def("is_separable", [](const CArray& rho, double tol) { return is_separable(to_density(rho), tol); },
        py::arg("rho"), py::arg("tol") = 1e-10);
  m.def("factorization_residual",
        [](const CArray& psi, double q) {
          return factorization_residual(to_state(psi), as_kraus(DepolarizingChannel(q)));
        },
        py::arg("psi"), py::arg("q"));
  m.def("eb_threshold",
        [](double lo, double hi, double width, double ppt_tol) {
          return eb_threshold(depolarizing_family(), lo, hi, width, ppt_tol);
        },
        py::arg("lo") = 0.0, py::arg("hi") = 1.0, py::arg("width") = 1e-9, py::arg("ppt_tol") = 1e-10);

  // security
  m.def("bob_cheat_probability",
        [](const CArray& s0, const CArray& s1, double q) {
          const auto r = bob_cheat_probability(to_density(s0), to_density(s1),
                                               as_kraus(DepolarizingChannel(q)));
          py::dict d;
          d["delta_raw"] = r.delta_raw;
          d["delta_channel"] = r.delta_channel;
          d["p_bcheat"] = r.p_bcheat;
          return d;
        },
        py::arg("sigma0"), py::arg("sigma1"), py::arg("q"));
  m.def("alice_binding_attack",
        [](double q, const CArray& target, std::optional<CArray> a0, std::optional<CArray> a1,
           std::size_t grid) {
          CheatStrategy s = CheatStrategy::bell(grid);
          if (a0) s.a0 = to_state(*a0);
          if (a1) s.a1 = to_state(*a1);
          const auto r = alice_binding_attack(s, DepolarizingChannel(q), to_density(target));
          py::dict d;
          d["best_fidelity_sq"] = r.best_fidelity_sq;
          d["best_theta"] = r.best_basis.theta();
          d["best_phi"] = r.best_basis.phi();
          d["min_fidelity_sq"] = r.min_fidelity_sq();
          d["max_no_signalling_residual"] = r.max_no_signalling_residual();
          return d;
        },
        py::arg("q"), py::arg("target"), py::arg("a0") = py::none(), py::arg("a1") = py::none(),
        py::arg("grid") = 64);

  // protocol
  m.def("expected_match_fraction", &expected_match_fraction, py::arg("q"));
  m.def("run_session",
        [](double q, std::uint64_t rounds, int bit, std::uint64_t seed, const std::string& alice,
           std::optional<int> target_bit, double accept_sigma) {
          const auto r = run_session(make_config(q, rounds, seed, accept_sigma),
                                     make_scenario(alice, target_bit), bit);
          return report_dict(r.report);
        },
        py::arg("q"), py::arg("rounds"), py::arg("bit") = 0, py::arg("seed") = 0,
        py::arg("alice") = "honest", py::arg("target_bit") = py::none(), py::arg("accept_sigma") = 3.0);
  m.def("monte_carlo",
        [](double q, std::uint64_t rounds, int bit, std::uint64_t seed, std::uint64_t trials,
           const std::string& alice, std::optional<int> target_bit, double accept_sigma,
           unsigned threads) {
          MonteCarloSummary s;
          {
            py::gil_scoped_release release;
            s = monte_carlo(make_config(q, rounds, seed, accept_sigma),
                            make_scenario(alice, target_bit), bit, trials, threads);
          }
          py::dict d;
          d["match_fraction_mean"] = s.match_fraction_mean;
          d["match_fraction_std"] = s.match_fraction_std;
          d["acceptance_rate"] = s.acceptance_rate;
          d["separable_fraction"] = s.separable_fraction;
          d["mean_concurrence"] = s.mean_concurrence;
          py::list trials_out;
          for (const auto& t : s.trials) {
            py::dict row = report_dict(t.report);
            row["seed"] = t.seed;
            trials_out.append(row);
          }
          d["trials"] = trials_out;
          return d;
        },
        py::arg("q"), py::arg("rounds"), py::arg("bit") = 0, py::arg("seed") = 0,
        py::arg("trials") = 1, py::arg("alice") = "honest", py::arg("target_bit") = py::none(),
        py::arg("accept_sigma") = 3.0, py::arg("threads") = 0);

  m.def("cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "ebcommit");
          std::vector<const char*> argv;
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out;
          std::ostringstream err;
          const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a tool subcommand in-process; returns (exit_code, stdout, stderr).");
}
