#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tssort/random.hpp"
#include "tssort/rating.hpp"

namespace tssort {

/// Ground-truth comparator whose answer is inverted with a fixed
/// probability, independently on every call. The greater value wins.
class NoisyComparator {
 public:
  /// Throws std::invalid_argument unless values are pairwise distinct and
  /// 0 <= noise_level <= 1.
  NoisyComparator(std::vector<double> true_values, double noise_level, std::uint64_t seed);

  /// Consumes exactly one uniform deviate. Never returns a draw.
  Outcome compare(std::size_t a, std::size_t b);
  /// "is a < b" under the same noise model.
  bool less(std::size_t a, std::size_t b) { return compare(a, b) == Outcome::second_wins; }

  double noise_level() const { return noise_level_; }
  std::uint64_t draws_made() const { return draws_made_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  double noise_level_;
  Rng rng_;
  std::uint64_t draws_made_ = 0;
};

/// Comparator over the values 0..n-1.
NoisyComparator identity_comparator(std::size_t n, double noise_level, std::uint64_t seed);

}  // namespace tssort
