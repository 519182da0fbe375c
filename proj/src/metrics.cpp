#include "tssort/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tssort {

double position_mse(std::span<const std::size_t> order) {
  const std::size_t n = order.size();
  if (n == 0) throw std::invalid_argument("position_mse of an empty list");
  std::vector<bool> seen(n, false);
  long double total = 0.0L;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t value = order[k];
    if (value >= n || seen[value]) throw std::invalid_argument("order is not a permutation");
    seen[value] = true;
    const long long d = static_cast<long long>(value) - static_cast<long long>(k);
    total += static_cast<long double>(d * d);
  }
  return static_cast<double>(total / static_cast<long double>(n));
}

ConvergenceCurve pad_and_aggregate(std::span<const std::vector<double>> runs,
                                   std::string algorithm_label, std::size_t list_length,
                                   double noise_level) {
  if (runs.empty()) throw std::invalid_argument("no runs to aggregate");
  std::size_t length = 0;
  for (const auto& run : runs) {
    if (run.empty()) throw std::invalid_argument("cannot aggregate an empty run");
    length = std::max(length, run.size());
  }

  ConvergenceCurve curve;
  curve.algorithm_label = std::move(algorithm_label);
  curve.list_length = list_length;
  curve.noise_level = noise_level;
  curve.per_step.reserve(length);

  const double count = static_cast<double>(runs.size());
  std::vector<double> column(runs.size());
  for (std::size_t step = 0; step < length; ++step) {
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto& run = runs[r];
      column[r] = step < run.size() ? run[step] : run.back();
    }
    // Summing in sorted order makes the result independent of run order.
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double x : column) sum += x;
    const double mean = sum / count;
    double sq = 0.0;
    for (double x : column) sq += (x - mean) * (x - mean);
    curve.per_step.push_back({step + 1, mean, std::sqrt(sq / count), runs.size()});
  }
  return curve;
}

}  // namespace tssort
