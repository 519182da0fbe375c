#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace tssort {

/// Name of the bit generator, recorded with experiment output.
inline constexpr std::string_view kGeneratorName = "mt19937_64";
/// How raw 64-bit outputs become uniform doubles and bounded integers.
inline constexpr std::string_view kDeviateScheme =
    "uniform01=(x>>11)*2^-53; below(n)=rejection on 2^64 mod n";

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stable hash of a tuple of integers, used to derive per-run seeds.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

/// Seeded generator with implementation-independent deviates: the standard
/// distributions are avoided because their output differs across libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  /// Uniform integer on [0, bound). bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> shuffled_identity(std::size_t n, Rng& rng);

}  // namespace tssort
