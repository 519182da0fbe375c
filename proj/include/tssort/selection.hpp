#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tssort/rating.hpp"

namespace tssort {

/// An item pair to compare next. Indices refer to the session's item list.
struct PairChoice {
  std::size_t first = 0;
  std::size_t second = 1;

  friend bool operator==(const PairChoice&, const PairChoice&) = default;
};

/// Overlap of the two 2-sigma intervals divided by the length of their union,
/// weighted by the wider interval. Negative for disjoint intervals.
double weighted_overlap(const GaussianRating& ri, const GaussianRating& rj);

// Full-pair strategies: argmax over all unordered pairs (i < j), ties to the
// lexicographically smallest (i, j). All throw std::invalid_argument on
// fewer than two items.
PairChoice select_max_draw_probability(std::span<const GaussianRating> ratings, double beta);
PairChoice select_max_weighted_overlap(std::span<const GaussianRating> ratings);

// Partner strategies: only successive items of the current ranking are
// candidates; ties to the earlier ranking position. The returned pair is
// (higher ranked, lower ranked).
PairChoice select_max_partner_weighted_overlap(std::span<const GaussianRating> ratings);
PairChoice select_max_partner_overlap_elo(std::span<const EloRating> scores);

/// Item indices by conservative score descending, ties by index ascending.
std::vector<std::size_t> rank_by_conservative_score(std::span<const GaussianRating> ratings);
/// Item indices by Elo score descending, ties by index ascending.
std::vector<std::size_t> rank_by_score(std::span<const EloRating> scores);

/// Best successive pair of an existing ranking.
PairChoice best_partner_by_overlap(std::span<const GaussianRating> ratings,
                                   std::span<const std::size_t> ranking);
PairChoice best_partner_by_gap(std::span<const EloRating> scores,
                               std::span<const std::size_t> ranking);

/// Maintains the argmax of a symmetric pair score over all unordered pairs
/// while single items change. After `refresh(a, b)` only O(n) scores are
/// re-evaluated in the common case instead of all n(n-1)/2. The tie-break
/// matches the exhaustive selectors exactly.
class PairArgmax {
 public:
  using ScoreFn = std::function<double(std::size_t, std::size_t)>;

  PairArgmax(std::size_t item_count, ScoreFn score);

  /// Re-evaluates every pair score touching items `a` or `b`.
  void refresh(std::size_t a, std::size_t b);
  PairChoice best() const { return best_; }

  /// Swaps in an equivalent score function (e.g. one reading a copied
  /// rating buffer). Cached state is kept.
  void rebind(ScoreFn score) { score_ = std::move(score); }

 private:
  struct RowBest {
    std::size_t column = 0;
    double value = 0.0;
  };

  void rebuild_row(std::size_t row);
  void offer(std::size_t row, std::size_t column, double value);
  void update_best();

  std::size_t n_;
  ScoreFn score_;
  // Row k holds pairs (k, m) with m > k.
  std::vector<RowBest> rows_;
  PairChoice best_;
};

}  // namespace tssort
