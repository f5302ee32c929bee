#pragma once

#include <cstdint>

namespace ebc {

enum class Role : std::uint32_t { Alice = 1, Bob = 2 };

enum class Purpose : std::uint32_t {
  Variant = 1,   // Alice's choice of encoding state
  Basis = 2,     // Bob's measurement basis
  Outcome = 3,   // Bob's Born-rule sample
  Steer = 4,     // Alice's steering measurement sample
};

/// Counter-based generator: every draw is a pure function of
/// (seed, round, role, purpose), so rounds and trials can be evaluated in any
/// order and still reproduce bit for bit.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }

  constexpr std::uint64_t bits(std::uint64_t round, Role role, Purpose purpose) const noexcept {
    std::uint64_t h = mix(seed_ + 0x9e3779b97f4a7c15ULL);
    h = mix(h ^ (round * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
    const std::uint64_t stream =
        (static_cast<std::uint64_t>(role) << 32) | static_cast<std::uint64_t>(purpose);
    return mix(h ^ (stream * 0xaef17502108ef2d9ULL));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t round, Role role, Purpose purpose) const noexcept {
    return static_cast<double>(bits(round, role, purpose) >> 11) * 0x1.0p-53;
  }

  /// Fair coin in {0, 1}.
  constexpr int coin(std::uint64_t round, Role role, Purpose purpose) const noexcept {
    return uniform(round, role, purpose) < 0.5 ? 0 : 1;
  }

 private:
  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace ebc
