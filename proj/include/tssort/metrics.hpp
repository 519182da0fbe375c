#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tssort {

/// (1/n) * sum_k (order[k] - k)^2 for a permutation of 0..n-1 listed in
/// ascending target order. Throws std::invalid_argument for non-permutations.
double position_mse(std::span<const std::size_t> order);

struct CurvePoint {
  std::size_t step = 0;  // comparisons made, starting at 1
  double mean_mse = 0.0;
  double std_mse = 0.0;  // population standard deviation
  std::size_t run_count = 0;
};

struct ConvergenceCurve {
  std::string algorithm_label;
  std::size_t list_length = 0;
  double noise_level = 0.0;
  std::vector<CurvePoint> per_step;
};

/// Right-pads shorter series with their last value and aggregates per step.
/// The per-step statistics do not depend on the order of `runs`. Throws on
/// empty input or an empty series.
ConvergenceCurve pad_and_aggregate(std::span<const std::vector<double>> runs,
                                   std::string algorithm_label = {}, std::size_t list_length = 0,
                                   double noise_level = 0.0);

}  // namespace tssort
