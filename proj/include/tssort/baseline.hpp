#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tssort/rating.hpp"
#include "tssort/selection.hpp"

namespace tssort {

/// Classical comparison sorts instrumented to expose their working list
/// after every comparison.
enum class Baseline { bubble, merge, quick };

std::string to_string(Baseline baseline);

/// Answers "is lhs < rhs". May be noisy; sorts must still terminate.
using LessThan = std::function<bool(std::size_t lhs, std::size_t rhs)>;

/// One comparison of a baseline run. `order` is only valid inside the
/// observer call.
struct StepView {
  std::size_t step = 0;  // 1-based comparison count
  PairChoice pair;       // items compared, as (lhs, rhs) of the less-than query
  Outcome outcome;       // second_wins iff lhs < rhs was answered
  std::span<const std::size_t> order;
};

using StepObserver = std::function<void(const StepView&)>;

/// Owning copy of a StepView.
struct StepTrace {
  std::size_t step_index = 0;
  PairChoice pair;
  Outcome outcome;
  std::vector<std::size_t> order_after;
};

/// Sorts `list` ascending and reports every comparison. Returns the number
/// of comparisons made.
///
/// Working-list conventions: bubble and quick sort expose their in-place
/// array. Merge sort is bottom-up and exposes, for the block being merged,
/// the merged prefix followed by the unconsumed suffixes of both runs; the
/// rest of the list is left as is. Quick sort uses the last element as pivot
/// with Lomuto partitioning, and the pivot is moved into place as part of a
/// partition's final comparison step. Bubble sort always makes n - 1 full
/// passes.
std::size_t run_baseline(Baseline baseline, std::vector<std::size_t> list, const LessThan& less,
                         const StepObserver& observer);

std::vector<StepTrace> run_baseline(Baseline baseline, std::span<const std::size_t> initial,
                                    const LessThan& less);

}  // namespace tssort
