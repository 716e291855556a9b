#pragma once

#include <cstdint>
#include <random>

namespace softcover {

/// Seeded random source. Every random quantity in the library is drawn from
/// one of these; concurrent tasks each own a substream derived from a counter,
/// so results never depend on scheduling.
///
/// Normal variates use Box-Muller on top of the engine output rather than
/// std::normal_distribution, whose algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent stream for task `index`, a pure function of (seed, index).
  Rng substream(std::uint64_t index) const;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal variate.
  double normal();

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

}  // namespace softcover
