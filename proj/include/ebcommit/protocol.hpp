#pragma once

// Bennett-Brassard style commitment through a depolarizing channel.
//
// Commit: for every round Alice sends one qubit, Bob depolarizes it and
// measures in a random BB84 basis. Open: Alice announces the bit and the
// per-round variant; Bob keeps the rounds measured in the bit's encoding basis
// and checks how many outcomes agree.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ebcommit/channels.hpp"
#include "ebcommit/random.hpp"
#include "ebcommit/security.hpp"
#include "ebcommit/states.hpp"

namespace ebc {

/// Raised when a protocol phase is invoked on a transcript in the wrong state.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ProtocolConfig {
  double q = 1.0;
  std::uint64_t rounds = 1000;
  NoiseLocation noise_location = NoiseLocation::TransmissionChannel;
  double accept_sigma = 3.0;
  std::uint64_t seed = 0;

  void validate() const;

  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

enum class AliceKind { Honest, Epr };

struct RoundRecord {
  /// Set for honest rounds; EPR rounds carry no classical symbol.
  std::optional<Bb84Symbol> alice_symbol;
  /// Index into Transcript::sent_states / received_states.
  std::uint32_t state_index = 0;
  Bb84Basis bob_basis = Bb84Basis::Rectilinear;
  int bob_outcome = 0;
  /// Outcome of Alice's steering measurement (EPR rounds, after opening).
  std::optional<int> alice_outcome;
  /// Variant Alice announces when opening.
  std::optional<int> announced_variant;
  bool sifted = false;
  /// Meaningful only when sifted.
  bool matched = false;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct Transcript {
  ProtocolConfig config;
  AliceKind alice = AliceKind::Honest;
  int committed_bit = 0;
  std::optional<int> opened_bit;

  /// Distinct states Alice sent: a qubit for honest rounds, the joint
  /// Alice-Bob state for EPR rounds. Rounds refer to them by index.
  std::vector<DensityMatrix> sent_states;
  /// The same states after Bob's channel, parallel to sent_states.
  std::vector<DensityMatrix> received_states;
  std::vector<RoundRecord> records;

  std::optional<CheatStrategy> strategy;
  std::optional<ProjectiveBasis> steer_basis;

  bool is_opened() const noexcept { return opened_bit.has_value(); }

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

struct VerificationReport {
  std::uint64_t sifted_count = 0;
  std::uint64_t match_count = 0;
  double match_fraction = 0.0;
  double expected_fraction = 0.0;
  double threshold = 0.0;
  bool accepted = false;
  /// Set when no round survived sifting; such reports never accept.
  bool no_sifted_rounds = false;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Sifted agreement probability for an honest Alice: q + (1 - q)/2.
double expected_match_fraction(double q);

Transcript commit_honest(const ProtocolConfig& config, int bit, const CounterRng& rng);

/// The strategy sees only its own amplitudes; q stays with Bob's side.
Transcript commit_cheating(const ProtocolConfig& config, const CheatStrategy& strategy,
                           int intended_bit, const CounterRng& rng);

/// Honest opening: announces the committed bit and the variants actually sent.
Transcript open_honest(Transcript transcript);

/// Alice measures her half of each joint state in `steer_basis` and announces
/// `target_bit` with her outcome as the variant. Bob's records are untouched.
Transcript open_and_steer(Transcript transcript, int target_bit,
                          const ProjectiveBasis& steer_basis, const CounterRng& rng);

/// Bob's qubit conditioned on Alice's steering outcome in an opened EPR round,
/// before his own measurement.
DensityMatrix bob_conditional_state(const Transcript& transcript, const RoundRecord& record);

VerificationReport verify(const Transcript& transcript);

struct Scenario {
  AliceKind alice = AliceKind::Honest;
  CheatStrategy strategy = CheatStrategy::bell();
  /// Bit announced by a cheating Alice; defaults to the committed bit.
  std::optional<int> target_bit;
  /// Steering basis; defaults to the encoding basis of the target bit.
  std::optional<ProjectiveBasis> steer_basis;
};

struct SessionResult {
  Transcript transcript;
  VerificationReport report;
};

/// commit -> open -> verify with all randomness drawn from config.seed.
SessionResult run_session(const ProtocolConfig& config, const Scenario& scenario, int bit);

struct TrialSummary {
  std::uint64_t seed = 0;
  VerificationReport report;
  /// Fraction of rounds whose post-channel Alice-Bob state is separable (1 for honest rounds).
  double separable_fraction = 1.0;
  /// Mean concurrence of the post-channel Alice-Bob state (0 for honest rounds).
  double mean_concurrence = 0.0;

  friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

struct MonteCarloSummary {
  std::vector<TrialSummary> trials;
  double match_fraction_mean = 0.0;
  /// Sample standard deviation; 0 for a single trial.
  double match_fraction_std = 0.0;
  double acceptance_rate = 0.0;
  double separable_fraction = 0.0;
  double mean_concurrence = 0.0;
};

/// Seed of trial `index`: the master seed plus the trial counter.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t index);

/// Runs `trials` independent sessions on up to `threads` workers (0: hardware
/// concurrency). Results do not depend on the thread count.
MonteCarloSummary monte_carlo(const ProtocolConfig& config, const Scenario& scenario, int bit,
                              std::uint64_t trials, unsigned threads = 0);

}  // namespace ebc
