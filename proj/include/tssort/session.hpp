#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tssort/rating.hpp"
#include "tssort/selection.hpp"

namespace tssort {

/// Rating model plus pair-selection strategy of a probabilistic sort.
enum class Algorithm {
  tssort_draw,           // TrueSkill, maximum draw probability
  tssort_wover,          // TrueSkill, maximum weighted overlap
  tssort_partner_wover,  // TrueSkill, maximum partner weighted overlap
  elosort_partner,       // Elo, maximum partner overlap
};

std::string to_string(Algorithm algorithm);
/// Case-insensitive; throws std::invalid_argument for unknown names.
Algorithm parse_algorithm(std::string_view name);
bool uses_trueskill(Algorithm algorithm);

struct SessionParams {
  TrueSkillParams trueskill;
  EloParams elo;
  /// Scales the n log2(n) comparison budget.
  double budget_multiplier = 1.0;
};

/// ceil(multiplier * n * log2(n)).
std::size_t comparison_budget(std::size_t item_count, double multiplier = 1.0);

struct HistoryEntry {
  PairChoice pair;
  Outcome outcome;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

/// Live state of one probabilistic sort. The session only ever sees
/// comparison outcomes, never the items themselves.
///
/// The ranking and the next pair are maintained eagerly in apply_outcome so
/// that next_pair() and order() are O(1) reads.
class SortSession {
 public:
  SortSession(std::size_t item_count, Algorithm algorithm, SessionParams params = {});

  SortSession(const SortSession& other);
  SortSession& operator=(const SortSession& other);
  SortSession(SortSession&&) noexcept;
  SortSession& operator=(SortSession&&) noexcept;
  ~SortSession();

  /// Rebuilds a session by replaying a recorded history.
  static SortSession replay(std::size_t item_count, Algorithm algorithm, SessionParams params,
                            std::span<const HistoryEntry> history);

  std::size_t item_count() const { return item_count_; }
  Algorithm algorithm() const { return algorithm_; }
  const SessionParams& params() const { return params_; }
  std::size_t budget() const { return budget_; }
  std::size_t comparisons_done() const { return history_.size(); }
  bool is_finished() const { return comparisons_done() >= budget_; }
  const std::vector<HistoryEntry>& history() const { return history_; }

  /// Throws std::logic_error once the session is finished.
  PairChoice next_pair() const;

  /// Applies the outcome of the pair returned by next_pair(). Throws
  /// std::logic_error if finished and std::invalid_argument for any other pair.
  void apply_outcome(PairChoice pair, Outcome outcome);

  /// Item indices, best first: conservative score (TrueSkill) or Elo score
  /// descending, ties by index ascending.
  std::span<const std::size_t> order() const { return order_; }
  std::vector<std::size_t> current_order() const { return order_; }

  /// Empty for the other model.
  std::span<const GaussianRating> gaussian_ratings() const { return gaussian_; }
  std::span<const EloRating> elo_ratings() const { return elo_; }

  /// The value the ranking is sorted by.
  double score(std::size_t item) const;

 private:
  bool ranks_before(std::size_t a, std::size_t b) const;
  void reposition(std::size_t a, std::size_t b);
  void select_next();

  std::size_t item_count_;
  Algorithm algorithm_;
  SessionParams params_;
  std::size_t budget_;
  std::vector<GaussianRating> gaussian_;
  std::vector<EloRating> elo_;
  std::vector<std::size_t> order_;
  std::vector<HistoryEntry> history_;
  std::unique_ptr<PairArgmax> argmax_;  // full-pair strategies only
  PairChoice next_;
};

}  // namespace tssort
