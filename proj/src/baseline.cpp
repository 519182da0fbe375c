#include "tssort/baseline.hpp"

#include <algorithm>
#include <utility>

namespace tssort {

namespace {

class Instrumented {
 public:
  Instrumented(std::vector<std::size_t> list, const LessThan& less, const StepObserver& observer)
      : list_(std::move(list)), less_(less), observer_(observer) {}

  std::vector<std::size_t>& list() { return list_; }
  std::size_t steps() const { return steps_; }

  bool ask(std::size_t lhs, std::size_t rhs) {
    last_pair_ = {lhs, rhs};
    last_answer_ = less_(lhs, rhs);
    ++steps_;
    return last_answer_;
  }

  // Reports the most recent comparison once the list reflects its effect.
  void report() {
    if (!observer_) return;
    observer_(StepView{steps_, last_pair_,
                       last_answer_ ? Outcome::second_wins : Outcome::first_wins, list_});
  }

 private:
  std::vector<std::size_t> list_;
  const LessThan& less_;
  const StepObserver& observer_;
  std::size_t steps_ = 0;
  PairChoice last_pair_;
  bool last_answer_ = false;
};

void bubble_sort(Instrumented& run) {
  auto& a = run.list();
  const std::size_t n = a.size();
  for (std::size_t pass = 0; pass + 1 < n; ++pass) {
    for (std::size_t j = 0; j + 1 < n - pass; ++j) {
      if (run.ask(a[j + 1], a[j])) std::swap(a[j], a[j + 1]);
      run.report();
    }
  }
}

void merge_sort(Instrumented& run) {
  auto& a = run.list();
  const std::size_t n = a.size();
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      // Invariant: a[lo, out) merged, a[out, mid) left suffix, a[mid, hi) right suffix.
      std::size_t out = lo;
      std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      while (out < mid && mid < hi) {
        if (run.ask(a[mid], a[out])) {
          std::rotate(a.begin() + static_cast<std::ptrdiff_t>(out),
                      a.begin() + static_cast<std::ptrdiff_t>(mid),
                      a.begin() + static_cast<std::ptrdiff_t>(mid + 1));
          ++mid;
        }
        ++out;
        run.report();
      }
    }
  }
}

void quick_sort(Instrumented& run) {
  auto& a = run.list();
  std::vector<std::pair<std::size_t, std::size_t>> pending;  // half-open ranges
  if (a.size() > 1) pending.emplace_back(0, a.size());
  while (!pending.empty()) {
    const auto [lo, hi] = pending.back();
    pending.pop_back();
    const std::size_t pivot = a[hi - 1];
    std::size_t store = lo;
    for (std::size_t j = lo; j + 1 < hi; ++j) {
      if (run.ask(a[j], pivot)) {
        std::swap(a[store], a[j]);
        ++store;
      }
      if (j + 2 == hi) std::swap(a[store], a[hi - 1]);
      run.report();
    }
    // Right part pushed first so the left part is finished first.
    if (hi - (store + 1) > 1) pending.emplace_back(store + 1, hi);
    if (store - lo > 1) pending.emplace_back(lo, store);
  }
}

}  // namespace

std::string to_string(Baseline baseline) {
  switch (baseline) {
    case Baseline::bubble:
      return "bubble";
    case Baseline::merge:
      return "merge";
    case Baseline::quick:
      return "quick";
  }
  return "?";
}

std::size_t run_baseline(Baseline baseline, std::vector<std::size_t> list, const LessThan& less,
                         const StepObserver& observer) {
  Instrumented run(std::move(list), less, observer);
  switch (baseline) {
    case Baseline::bubble:
      bubble_sort(run);
      break;
    case Baseline::merge:
      merge_sort(run);
      break;
    case Baseline::quick:
      quick_sort(run);
      break;
  }
  return run.steps();
}

std::vector<StepTrace> run_baseline(Baseline baseline, std::span<const std::size_t> initial,
                                    const LessThan& less) {
  std::vector<StepTrace> traces;
  run_baseline(baseline, std::vector<std::size_t>(initial.begin(), initial.end()), less,
               [&](const StepView& view) {
                 traces.push_back({view.step, view.pair, view.outcome,
                                   std::vector<std::size_t>(view.order.begin(), view.order.end())});
               });
  return traces;
}

}  // namespace tssort
