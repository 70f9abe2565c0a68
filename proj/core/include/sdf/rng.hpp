#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace sdf {

/// Seeded pseudo-random generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions built on top of it (bounded integers, uniform
/// reals, normals) are implemented here rather than taken from <random>,
/// because the standard library distributions are implementation-defined and
/// would make seeded runs differ between toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::size_t uniform_index(std::size_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal variate (Box-Muller, one value per call).
  double normal();

  /// Textual engine state, suitable for snapshots.
  std::string state() const;
  void set_state(const std::string& state);

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer: derives an independent child seed for `stream`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Fisher-Yates shuffle driven by `rng`.
void shuffle(std::span<std::size_t> values, Rng& rng);

/// Draws `count` distinct values from {0..population-1}, returned ascending.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count,
                                                    Rng& rng);

/// `count` draws with replacement from {0..population-1}, in draw order.
std::vector<std::size_t> bootstrap_indices(std::size_t population, std::size_t count, Rng& rng);

}  // namespace sdf
