#pragma once

#include <cstdint>
#include <random>

namespace geonet {

// Purpose tags for derived streams. Values are part of the reproducibility
// contract and must not be renumbered.
enum class StreamTag : std::uint64_t {
  Simulation = 1,
  Marking = 2,
  Points = 3,
  KMeans = 4,
  Poisson = 5,
  VisitOrder = 6,
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// Random stream used everywhere in the library.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
// All distributions are implemented here (not via <random> distributions,
// whose algorithms differ between standard libraries), so a given seed yields
// the same draws on every conforming toolchain with the same libm.
//
// Derived streams: derive(seed, index, tag) seeds a fresh engine with
// mix64(mix64(mix64(seed) ^ index) ^ tag), giving independent per-replication
// and per-purpose streams from one user seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng derive(std::uint64_t seed, std::uint64_t index, StreamTag tag);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  bool bernoulli(double p);
  double exponential(double rate);
  // Standard normal (Box-Muller, one variate per call).
  double normal();
  // Poisson(mean): inversion below mean 30, Hormann's PTRS above.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace geonet
