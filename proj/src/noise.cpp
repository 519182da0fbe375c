#include "tssort/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tssort {

NoisyComparator::NoisyComparator(std::vector<double> true_values, double noise_level,
                                 std::uint64_t seed)
    : values_(std::move(true_values)), noise_level_(noise_level), rng_(seed) {
  if (!(noise_level_ >= 0.0 && noise_level_ <= 1.0)) {
    throw std::invalid_argument("noise level must lie in [0, 1], got " +
                                std::to_string(noise_level_));
  }
  std::vector<double> sorted = values_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("true values must be pairwise distinct");
  }
}

Outcome NoisyComparator::compare(std::size_t a, std::size_t b) {
  if (a >= values_.size() || b >= values_.size()) {
    throw std::out_of_range("comparator index out of range");
  }
  if (a == b) throw std::invalid_argument("cannot compare an item with itself");
  const Outcome truth = values_[a] > values_[b] ? Outcome::first_wins : Outcome::second_wins;
  ++draws_made_;
  return rng_.uniform01() < noise_level_ ? invert(truth) : truth;
}

NoisyComparator identity_comparator(std::size_t n, double noise_level, std::uint64_t seed) {
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(i);
  return NoisyComparator(std::move(values), noise_level, seed);
}

}  // namespace tssort
