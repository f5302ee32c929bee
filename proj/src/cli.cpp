#include "ebcommit/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ebcommit/channels.hpp"
#include "ebcommit/entanglement.hpp"
#include "ebcommit/protocol.hpp"
#include "ebcommit/report_io.hpp"
#include "ebcommit/security.hpp"

namespace ebc::cli {

namespace {

using io::Json;
using io::Table;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputOptions {
  std::string format = "csv";
  std::string path;

  void add_to(CLI::App* app) {
    app->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app->add_option("--output", path, "Write the table to this file instead of stdout");
  }

  Json meta_entries() const { return Json{{"format", format}, {"output", path}}; }
};

struct SessionOptions {
  double q = 1.0;
  std::uint64_t rounds = 1000;
  int bit = 0;
  std::uint64_t seed = 0;
  std::string alice = "honest";
  std::string noise_location = "channel";
  double accept_sigma = 3.0;
  int target_bit = -1;

  void add_to(CLI::App* app) {
    app->add_option("--q", q, "Depolarizing parameter (probability the qubit passes)")
        ->capture_default_str();
    app->add_option("--rounds", rounds, "Qubits per commitment")->capture_default_str();
    app->add_option("--bit", bit, "Committed bit")->check(CLI::Range(0, 1))->capture_default_str();
    app->add_option("--seed", seed, "Master seed for all randomness")->capture_default_str();
    app->add_option("--alice", alice, "Alice's behaviour")
        ->check(CLI::IsMember({"honest", "epr"}))
        ->capture_default_str();
    app->add_option("--noise-location", noise_location, "Where Bob's noise is applied")
        ->check(CLI::IsMember({"bob", "channel"}))
        ->capture_default_str();
    app->add_option("--accept-sigma", accept_sigma, "Width of Bob's one-sided acceptance band")
        ->capture_default_str();
    app->add_option("--target-bit", target_bit,
                    "Bit a cheating Alice announces (defaults to --bit)")
        ->check(CLI::Range(0, 1));
  }

  ProtocolConfig config() const {
    ProtocolConfig c;
    c.q = q;
    c.rounds = rounds;
    c.seed = seed;
    c.accept_sigma = accept_sigma;
    c.noise_location = parse_noise_location(noise_location);
    c.validate();
    return c;
  }

  Scenario scenario() const {
    Scenario s;
    s.alice = alice == "epr" ? AliceKind::Epr : AliceKind::Honest;
    if (target_bit >= 0) s.target_bit = target_bit;
    return s;
  }

  Json meta_entries() const {
    return Json{{"q", q},
                {"rounds", rounds},
                {"bit", bit},
                {"seed", seed},
                {"alice", alice},
                {"noise_location", noise_location},
                {"accept_sigma", accept_sigma},
                {"target_bit", target_bit >= 0 ? Json(target_bit) : Json(nullptr)}};
  }
};

Json make_meta(std::string_view command, const Json& flags) {
  Json meta = Json::object();
  meta["command"] = command;
  meta["version"] = io::kVersion;
  meta["flags"] = flags;
  return meta;
}

Json merged(Json a, const Json& b) {
  for (auto it = b.begin(); it != b.end(); ++it) a[it.key()] = it.value();
  return a;
}

/// Writes either the CSV tables (separated by a blank line) or one JSON document.
void emit(const OutputOptions& output, const Json& meta, const Table& main_table,
          const Table* extra_table, std::string_view extra_name, std::ostream& out) {
  std::ostringstream buffer;
  if (output.format == "json") {
    Json doc = io::document(meta, main_table);
    if (extra_table) doc[std::string(extra_name)] = io::rows_to_json(*extra_table);
    buffer << doc.dump(2) << '\n';
  } else {
    io::write_csv(main_table, buffer);
    if (extra_table) {
      buffer << '\n';
      io::write_csv(*extra_table, buffer);
    }
  }
  if (output.path.empty()) {
    out << buffer.str();
    out.flush();
    return;
  }
  std::ofstream file(output.path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + output.path + "'");
  file << buffer.str();
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
  if (steps < 1) throw UsageError("empty q grid: --q-steps must be >= 1");
  if (!(lo <= hi)) throw UsageError("empty q grid: --q-min exceeds --q-max");
  if (lo < 0.0 || hi > 1.0) throw UsageError("q grid must lie within [0, 1]");
  std::vector<double> grid;
  for (int i = 0; i < steps; ++i) {
    grid.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
  }
  return grid;
}

double round_to_decimals(double value, int decimals) {
  const std::string text = fmt::format("{:.{}f}", value, decimals);
  double out = value;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

// --- subcommands ----------------------------------------------------------

int cmd_run(const SessionOptions& session, bool dump_transcript, const OutputOptions& output,
            std::ostream& out) {
  const SessionResult result = run_session(session.config(), session.scenario(), session.bit);
  const Table report = io::report_table(result.transcript, result.report);
  Json flags = merged(session.meta_entries(), output.meta_entries());
  flags["dump_transcript"] = dump_transcript;
  if (dump_transcript) {
    const Table transcript = io::transcript_table(result.transcript);
    emit(output, make_meta("run", flags), report, &transcript, "transcript", out);
  } else {
    emit(output, make_meta("run", flags), report, nullptr, {}, out);
  }
  return result.report.accepted ? kExitOk : kExitRejected;
}

struct SweepOptions {
  double q_min = 0.0;
  double q_max = 1.0;
  int q_steps = 11;
  std::uint64_t trials = 20;
  unsigned threads = 0;
};

int cmd_sweep(SessionOptions session, const SweepOptions& sweep, const OutputOptions& output,
              std::ostream& out) {
  const auto grid = linear_grid(sweep.q_min, sweep.q_max, sweep.q_steps);
  if (sweep.trials < 1) throw UsageError("--trials must be >= 1");
  Table table;
  table.columns = {"q",
                   "match_fraction_mean",
                   "match_fraction_std",
                   "acceptance_rate",
                   "separable_fraction",
                   "mean_concurrence_post_channel"};
  for (double q : grid) {
    session.q = q;
    const MonteCarloSummary mc = monte_carlo(session.config(), session.scenario(), session.bit,
                                             sweep.trials, sweep.threads);
    table.add_row({q, mc.match_fraction_mean, mc.match_fraction_std, mc.acceptance_rate,
                   mc.separable_fraction, mc.mean_concurrence});
  }
  Json flags = merged(session.meta_entries(), output.meta_entries());
  flags.erase("q");
  flags["q_min"] = sweep.q_min;
  flags["q_max"] = sweep.q_max;
  flags["q_steps"] = sweep.q_steps;
  flags["trials"] = sweep.trials;
  emit(output, make_meta("sweep", flags), table, nullptr, {}, out);
  return kExitOk;
}

struct ThresholdOptions {
  double lo = 0.0;
  double hi = 1.0;
  double tol = 1e-9;
  double ppt_tol = 1e-10;
};

int cmd_threshold(const ThresholdOptions& opt, const OutputOptions& output, std::ostream& out) {
  double q_star = 0.0;
  try {
    q_star = eb_threshold(depolarizing_family(), opt.lo, opt.hi, opt.tol, opt.ppt_tol);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  Table table;
  table.columns = {"q_star", "width"};
  table.add_row({round_to_decimals(q_star, 9), opt.tol});
  const Json flags = merged(Json{{"lo", opt.lo}, {"hi", opt.hi}, {"tol", opt.tol},
                                 {"ppt_tol", opt.ppt_tol}},
                            output.meta_entries());
  emit(output, make_meta("threshold", flags), table, nullptr, {}, out);
  return kExitOk;
}

struct HidingOptions {
  std::string states = "bb84";
  std::string sigma0;
  std::string sigma1;
  double q = 1.0;
};

int cmd_hiding(const HidingOptions& opt, const OutputOptions& output, std::ostream& out) {
  DensityMatrix s0;
  DensityMatrix s1;
  if (!opt.sigma0.empty() || !opt.sigma1.empty()) {
    if (opt.sigma0.empty() || opt.sigma1.empty()) {
      throw UsageError("--sigma0 and --sigma1 must be given together");
    }
    s0 = DensityMatrix::pure(parse_qubit_state(opt.sigma0));
    s1 = DensityMatrix::pure(parse_qubit_state(opt.sigma1));
  } else if (opt.states == "bb84") {
    s0 = bb84_bit_average(0);
    s1 = bb84_bit_average(1);
  } else {
    throw UsageError("unknown state set '" + opt.states + "'");
  }
  const HidingReport r = bob_cheat_probability(s0, s1, as_kraus(DepolarizingChannel(opt.q)));
  Table table;
  table.columns = {"q", "delta_raw", "delta_channel", "p_bcheat"};
  table.add_row({opt.q, r.delta_raw, r.delta_channel, r.p_bcheat});
  const Json flags = merged(Json{{"states", opt.states},
                                 {"sigma0", opt.sigma0},
                                 {"sigma1", opt.sigma1},
                                 {"q", opt.q}},
                            output.meta_entries());
  emit(output, make_meta("hiding", flags), table, nullptr, {}, out);
  return kExitOk;
}

struct BindingOptions {
  double q = 1.0;
  std::vector<double> q_grid;
  std::string a0 = "0";
  std::string a1 = "1";
  std::string target = "0";
  std::size_t grid = 64;
};

int cmd_binding(const BindingOptions& opt, const OutputOptions& output, std::ostream& out) {
  CheatStrategy strategy;
  strategy.a0 = parse_qubit_state(opt.a0);
  strategy.a1 = parse_qubit_state(opt.a1);
  strategy.steer_grid = opt.grid;
  strategy.validate();
  const DensityMatrix target = DensityMatrix::pure(parse_qubit_state(opt.target));
  const std::vector<double> qs = opt.q_grid.empty() ? std::vector<double>{opt.q} : opt.q_grid;
  for (double q : qs) {
    if (!(q >= 0.0 && q <= 1.0)) throw UsageError("q values must lie within [0, 1]");
  }

  Table table;
  table.columns = {"q", "best_fidelity_sq", "best_theta", "best_phi",
                   "max_no_signalling_residual"};
  for (const auto& p : binding_curve(strategy, qs, target)) {
    table.add_row({p.q, p.best_fidelity_sq, p.best_basis.theta(), p.best_basis.phi(),
                   p.max_no_signalling_residual});
  }
  Json grid_json = Json::array();
  for (double q : opt.q_grid) grid_json.push_back(q);
  const Json flags = merged(Json{{"q", opt.q},
                                 {"q_grid", grid_json},
                                 {"a0", opt.a0},
                                 {"a1", opt.a1},
                                 {"target", opt.target},
                                 {"grid", opt.grid}},
                            output.meta_entries());
  emit(output, make_meta("binding", flags), table, nullptr, {}, out);
  return kExitOk;
}

}  // namespace

StateVector parse_qubit_state(std::string_view text) {
  const double h = std::numbers::sqrt2 / 2.0;
  if (text == "0") return StateVector::basis(2, 0);
  if (text == "1") return StateVector::basis(2, 1);
  if (text == "+") return StateVector({h, h});
  if (text == "-") return StateVector({h, -h});
  if (text == "+i") return StateVector({h, cplx(0, h)});
  if (text == "-i") return StateVector({h, cplx(0, -h)});

  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw UsageError("malformed state '" + std::string(text) + "'");
  }
  auto parse = [&](std::string_view part) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || !std::isfinite(v)) {
      throw UsageError("malformed state '" + std::string(text) + "'");
    }
    return v;
  };
  const double theta = parse(text.substr(0, comma));
  const double phi = parse(text.substr(comma + 1));
  if (theta < 0.0 || theta > std::numbers::pi) {
    throw UsageError("state theta must lie within [0, pi]");
  }
  return StateVector::bloch(theta, phi);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement-breaking channel bit commitment experiments", "ebcommit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kVersion));

  OutputOptions output;

  SessionOptions run_session_opts;
  bool dump_transcript = false;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one commit/open/verify session");
  run_session_opts.add_to(run_cmd);
  run_cmd->add_flag("--dump-transcript", dump_transcript, "Append the per-round transcript");
  output.add_to(run_cmd);

  SessionOptions sweep_session_opts;
  sweep_session_opts.rounds = 10000;
  SweepOptions sweep_opts;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo statistics over a grid of q");
  sweep_session_opts.add_to(sweep_cmd);
  sweep_cmd->add_option("--q-min", sweep_opts.q_min)->capture_default_str();
  sweep_cmd->add_option("--q-max", sweep_opts.q_max)->capture_default_str();
  sweep_cmd->add_option("--q-steps", sweep_opts.q_steps)->capture_default_str();
  sweep_cmd->add_option("--trials", sweep_opts.trials, "Sessions per grid point")
      ->capture_default_str();
  sweep_cmd->add_option("--threads", sweep_opts.threads, "Worker threads (0: all cores)")
      ->capture_default_str();
  output.add_to(sweep_cmd);

  ThresholdOptions threshold_opts;
  CLI::App* threshold_cmd =
      app.add_subcommand("threshold", "Locate the entanglement-breaking threshold of q");
  threshold_cmd->add_option("--lo", threshold_opts.lo)->capture_default_str();
  threshold_cmd->add_option("--hi", threshold_opts.hi)->capture_default_str();
  threshold_cmd->add_option("--tol", threshold_opts.tol, "Final bracket width")
      ->capture_default_str();
  threshold_cmd->add_option("--ppt-tol", threshold_opts.ppt_tol)->capture_default_str();
  output.add_to(threshold_cmd);

  HidingOptions hiding_opts;
  CLI::App* hiding_cmd = app.add_subcommand("hiding", "Bob's guessing probability bound");
  hiding_cmd->add_option("--states", hiding_opts.states, "Named state pair")
      ->capture_default_str();
  hiding_cmd->add_option("--sigma0", hiding_opts.sigma0, "Explicit state for bit 0");
  hiding_cmd->add_option("--sigma1", hiding_opts.sigma1, "Explicit state for bit 1");
  hiding_cmd->add_option("--q", hiding_opts.q)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  output.add_to(hiding_cmd);

  BindingOptions binding_opts;
  CLI::App* binding_cmd = app.add_subcommand("binding", "Alice's best steering fidelity");
  binding_cmd->add_option("--q", binding_opts.q)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  binding_cmd->add_option("--q-grid", binding_opts.q_grid, "Comma separated q values")
      ->delimiter(',');
  binding_cmd->add_option("--a0", binding_opts.a0)->capture_default_str();
  binding_cmd->add_option("--a1", binding_opts.a1)->capture_default_str();
  binding_cmd->add_option("--target", binding_opts.target)->capture_default_str();
  binding_cmd->add_option("--grid", binding_opts.grid, "Steering grid points per axis")
      ->capture_default_str();
  output.add_to(binding_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_session_opts, dump_transcript, output, out);
    if (*sweep_cmd) return cmd_sweep(sweep_session_opts, sweep_opts, output, out);
    if (*threshold_cmd) return cmd_threshold(threshold_opts, output, out);
    if (*hiding_cmd) return cmd_hiding(hiding_opts, output, out);
    if (*binding_cmd) return cmd_binding(binding_opts, output, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace ebc::cli
