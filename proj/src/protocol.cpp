#include "ebcommit/protocol.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "ebcommit/entanglement.hpp"

namespace ebc {

namespace {

void require_bit(int bit, const char* what) {
  if (bit != 0 && bit != 1) throw std::invalid_argument(std::string(what) + " must be 0 or 1");
}

Bb84Basis draw_bob_basis(const CounterRng& rng, std::uint64_t round) {
  return rng.coin(round, Role::Bob, Purpose::Basis) == 0 ? Bb84Basis::Rectilinear
                                                          : Bb84Basis::Diagonal;
}

const ProjectiveBasis& bob_basis_vectors(Bb84Basis basis) {
  static const ProjectiveBasis rectilinear = ProjectiveBasis::from(Bb84Basis::Rectilinear);
  static const ProjectiveBasis diagonal = ProjectiveBasis::from(Bb84Basis::Diagonal);
  return basis == Bb84Basis::Rectilinear ? rectilinear : diagonal;
}

// Marks sifted rounds and agreement once the announcement is known.
void sift(Transcript& t) {
  const Bb84Basis expected = encoding_basis(*t.opened_bit);
  for (auto& rec : t.records) {
    rec.sifted = rec.bob_basis == expected;
    rec.matched = rec.sifted && rec.announced_variant == rec.bob_outcome;
  }
}

TrialSummary summarize(const SessionResult& session) {
  const Transcript& t = session.transcript;
  TrialSummary s;
  s.seed = t.config.seed;
  s.report = session.report;
  if (t.alice == AliceKind::Honest || t.records.empty()) return s;

  std::vector<std::uint64_t> uses(t.received_states.size(), 0);
  for (const auto& rec : t.records) ++uses[rec.state_index];
  double separable = 0.0;
  double conc = 0.0;
  for (std::size_t i = 0; i < uses.size(); ++i) {
    if (uses[i] == 0) continue;
    const double w = static_cast<double>(uses[i]);
    if (is_separable(t.received_states[i])) separable += w;
    conc += w * concurrence(t.received_states[i]).value;
  }
  const double n = static_cast<double>(t.records.size());
  s.separable_fraction = separable / n;
  s.mean_concurrence = conc / n;
  return s;
}

}  // namespace

void ProtocolConfig::validate() const {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (!(accept_sigma >= 0.0) || !std::isfinite(accept_sigma)) {
    throw std::invalid_argument("accept_sigma must be a finite nonnegative number");
  }
  if (rounds > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("rounds is too large");
  }
}

double expected_match_fraction(double q) { return q + (1.0 - q) / 2.0; }

Transcript commit_honest(const ProtocolConfig& config, int bit, const CounterRng& rng) {
  config.validate();
  require_bit(bit, "bit");
  const DepolarizingChannel channel(config.q);

  Transcript t;
  t.config = config;
  t.alice = AliceKind::Honest;
  t.committed_bit = bit;
  for (int variant = 0; variant < 2; ++variant) {
    const DensityMatrix sent = DensityMatrix::pure(bb84_state({bit, variant}));
    t.received_states.push_back(depolarize_apply(channel, sent));
    t.sent_states.push_back(sent);
  }

  t.records.reserve(config.rounds);
  for (std::uint64_t r = 0; r < config.rounds; ++r) {
    const int variant = rng.coin(r, Role::Alice, Purpose::Variant);
    RoundRecord rec;
    rec.alice_symbol = Bb84Symbol(bit, variant);
    rec.state_index = static_cast<std::uint32_t>(variant);
    rec.bob_basis = draw_bob_basis(rng, r);
    rec.bob_outcome = measure(t.received_states[rec.state_index], bob_basis_vectors(rec.bob_basis),
                              rng.uniform(r, Role::Bob, Purpose::Outcome))
                          .outcome;
    t.records.push_back(rec);
  }
  return t;
}

Transcript commit_cheating(const ProtocolConfig& config, const CheatStrategy& strategy,
                           int intended_bit, const CounterRng& rng) {
  config.validate();
  strategy.validate();
  require_bit(intended_bit, "bit");
  const DepolarizingChannel channel(config.q);

  Transcript t;
  t.config = config;
  t.alice = AliceKind::Epr;
  t.committed_bit = intended_bit;
  t.strategy = strategy;
  t.sent_states.push_back(cheat_state(strategy.a0, strategy.a1));
  t.received_states.push_back(lift_apply(channel, t.sent_states.front()));
  const DensityMatrix bob_marginal = partial_trace(t.received_states.front(), Subsystem::B);

  t.records.reserve(config.rounds);
  for (std::uint64_t r = 0; r < config.rounds; ++r) {
    RoundRecord rec;
    rec.state_index = 0;
    rec.bob_basis = draw_bob_basis(rng, r);
    rec.bob_outcome = measure(bob_marginal, bob_basis_vectors(rec.bob_basis),
                              rng.uniform(r, Role::Bob, Purpose::Outcome))
                          .outcome;
    t.records.push_back(rec);
  }
  return t;
}

Transcript open_honest(Transcript transcript) {
  if (transcript.alice != AliceKind::Honest) {
    throw ProtocolError("open_honest: transcript was produced by a cheating Alice");
  }
  if (transcript.is_opened()) throw ProtocolError("open_honest: transcript is already opened");
  transcript.opened_bit = transcript.committed_bit;
  for (auto& rec : transcript.records) rec.announced_variant = rec.alice_symbol->variant;
  sift(transcript);
  return transcript;
}

Transcript open_and_steer(Transcript transcript, int target_bit,
                          const ProjectiveBasis& steer_basis, const CounterRng& rng) {
  if (transcript.alice != AliceKind::Epr) {
    throw ProtocolError("open_and_steer: honest transcripts are opened with open_honest");
  }
  if (transcript.is_opened()) throw ProtocolError("open_and_steer: transcript is already opened");
  require_bit(target_bit, "target bit");

  // Alice's qubit given Bob's recorded outcome; her measurement is sampled from
  // it so the joint statistics match measuring both halves of the shared state.
  std::map<std::tuple<std::uint32_t, Bb84Basis, int>, DensityMatrix> alice_given_bob;
  auto alice_state = [&](const RoundRecord& rec) -> const DensityMatrix& {
    const auto key = std::make_tuple(rec.state_index, rec.bob_basis, rec.bob_outcome);
    auto it = alice_given_bob.find(key);
    if (it == alice_given_bob.end()) {
      const DensityMatrix& joint = transcript.received_states.at(rec.state_index);
      ConditionalState cond =
          conditional_state(joint, Subsystem::B, bob_basis_vectors(rec.bob_basis), rec.bob_outcome);
      DensityMatrix alice = cond.state ? std::move(*cond.state) : partial_trace(joint, Subsystem::A);
      it = alice_given_bob.emplace(key, std::move(alice)).first;
    }
    return it->second;
  };

  for (std::uint64_t r = 0; r < transcript.records.size(); ++r) {
    RoundRecord& rec = transcript.records[r];
    const int outcome =
        measure(alice_state(rec), steer_basis, rng.uniform(r, Role::Alice, Purpose::Steer)).outcome;
    rec.alice_outcome = outcome;
    rec.announced_variant = outcome;
  }
  transcript.opened_bit = target_bit;
  transcript.steer_basis = steer_basis;
  sift(transcript);
  return transcript;
}

DensityMatrix bob_conditional_state(const Transcript& transcript, const RoundRecord& record) {
  if (transcript.alice != AliceKind::Epr || !transcript.steer_basis || !record.alice_outcome) {
    throw ProtocolError("bob_conditional_state: needs an opened EPR round");
  }
  ConditionalState cond = conditional_state(transcript.received_states.at(record.state_index),
                                            Subsystem::A, *transcript.steer_basis,
                                            *record.alice_outcome);
  if (!cond.state) throw ProtocolError("bob_conditional_state: outcome has zero probability");
  return std::move(*cond.state);
}

VerificationReport verify(const Transcript& transcript) {
  if (!transcript.is_opened()) throw ProtocolError("verify: transcript has not been opened");
  VerificationReport report;
  for (const auto& rec : transcript.records) {
    if (!rec.sifted) continue;
    ++report.sifted_count;
    if (rec.matched) ++report.match_count;
  }
  report.expected_fraction = expected_match_fraction(transcript.config.q);
  if (report.sifted_count == 0) {
    report.no_sifted_rounds = true;
    report.threshold = report.expected_fraction;
    report.accepted = false;
    return report;
  }
  const double n = static_cast<double>(report.sifted_count);
  const double e = report.expected_fraction;
  report.match_fraction = static_cast<double>(report.match_count) / n;
  report.threshold = e - transcript.config.accept_sigma * std::sqrt(e * (1.0 - e) / n);
  report.accepted = report.match_fraction >= report.threshold;
  return report;
}

SessionResult run_session(const ProtocolConfig& config, const Scenario& scenario, int bit) {
  const CounterRng rng(config.seed);
  Transcript t;
  if (scenario.alice == AliceKind::Honest) {
    t = open_honest(commit_honest(config, bit, rng));
  } else {
    const int target = scenario.target_bit.value_or(bit);
    const ProjectiveBasis basis =
        scenario.steer_basis.value_or(ProjectiveBasis::from(encoding_basis(target)));
    t = open_and_steer(commit_cheating(config, scenario.strategy, bit, rng), target, basis, rng);
  }
  VerificationReport report = verify(t);
  return {std::move(t), report};
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index) {
  return master_seed + index;
}

MonteCarloSummary monte_carlo(const ProtocolConfig& config, const Scenario& scenario, int bit,
                              std::uint64_t trials, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  config.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  std::vector<TrialSummary> results(trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::uint64_t i = next++; i < trials; i = next++) {
      try {
        ProtocolConfig trial_config = config;
        trial_config.seed = trial_seed(config.seed, i);
        results[i] = summarize(run_session(trial_config, scenario, bit));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  MonteCarloSummary summary;
  const double n = static_cast<double>(trials);
  std::uint64_t accepted = 0;
  for (const auto& r : results) {
    summary.match_fraction_mean += r.report.match_fraction;
    summary.separable_fraction += r.separable_fraction;
    summary.mean_concurrence += r.mean_concurrence;
    if (r.report.accepted) ++accepted;
  }
  summary.match_fraction_mean /= n;
  summary.separable_fraction /= n;
  summary.mean_concurrence /= n;
  summary.acceptance_rate = static_cast<double>(accepted) / n;
  if (trials > 1) {
    double ss = 0.0;
    for (const auto& r : results) {
      const double d = r.report.match_fraction - summary.match_fraction_mean;
      ss += d * d;
    }
    summary.match_fraction_std = std::sqrt(ss / (n - 1.0));
  }
  summary.trials = std::move(results);
  return summary;
}

}  // namespace ebc
