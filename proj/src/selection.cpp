#include "tssort/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tssort {

namespace {

void require_pairs(std::size_t n) {
  if (n < 2) throw std::invalid_argument("pair selection needs at least two items");
}

template <typename Score>
PairChoice exhaustive_argmax(std::size_t n, Score&& score) {
  require_pairs(n);
  PairChoice best{0, 1};
  double best_value = score(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double value = score(i, j);
      if (value > best_value) {
        best_value = value;
        best = {i, j};
      }
    }
  }
  return best;
}

template <typename Key>
std::vector<std::size_t> rank_descending(std::size_t n, Key&& key) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ka = key(a);
    const double kb = key(b);
    if (ka != kb) return ka > kb;
    return a < b;
  });
  return order;
}

}  // namespace

double weighted_overlap(const GaussianRating& ri, const GaussianRating& rj) {
  const double a = ri.mu - 2.0 * ri.sigma;
  const double b = ri.mu + 2.0 * ri.sigma;
  const double c = rj.mu - 2.0 * rj.sigma;
  const double d = rj.mu + 2.0 * rj.sigma;
  const double shared = std::min(b, d) - std::max(a, c);
  const double span = std::max(b, d) - std::min(a, c);
  return shared / span * std::max(b - a, d - c);
}

PairChoice select_max_draw_probability(std::span<const GaussianRating> ratings, double beta) {
  return exhaustive_argmax(ratings.size(), [&](std::size_t i, std::size_t j) {
    return draw_probability(ratings[i], ratings[j], beta);
  });
}

PairChoice select_max_weighted_overlap(std::span<const GaussianRating> ratings) {
  return exhaustive_argmax(ratings.size(), [&](std::size_t i, std::size_t j) {
    return weighted_overlap(ratings[i], ratings[j]);
  });
}

std::vector<std::size_t> rank_by_conservative_score(std::span<const GaussianRating> ratings) {
  return rank_descending(ratings.size(),
                         [&](std::size_t i) { return conservative_score(ratings[i]); });
}

std::vector<std::size_t> rank_by_score(std::span<const EloRating> scores) {
  return rank_descending(scores.size(), [&](std::size_t i) { return scores[i].score; });
}

PairChoice best_partner_by_overlap(std::span<const GaussianRating> ratings,
                                   std::span<const std::size_t> ranking) {
  require_pairs(ranking.size());
  std::size_t best_pos = 0;
  double best_value = weighted_overlap(ratings[ranking[0]], ratings[ranking[1]]);
  for (std::size_t pos = 1; pos + 1 < ranking.size(); ++pos) {
    const double value = weighted_overlap(ratings[ranking[pos]], ratings[ranking[pos + 1]]);
    if (value > best_value) {
      best_value = value;
      best_pos = pos;
    }
  }
  return {ranking[best_pos], ranking[best_pos + 1]};
}

PairChoice best_partner_by_gap(std::span<const EloRating> scores,
                               std::span<const std::size_t> ranking) {
  require_pairs(ranking.size());
  std::size_t best_pos = 0;
  double best_gap = scores[ranking[0]].score - scores[ranking[1]].score;
  for (std::size_t pos = 1; pos + 1 < ranking.size(); ++pos) {
    const double gap = scores[ranking[pos]].score - scores[ranking[pos + 1]].score;
    if (gap < best_gap) {
      best_gap = gap;
      best_pos = pos;
    }
  }
  return {ranking[best_pos], ranking[best_pos + 1]};
}

PairChoice select_max_partner_weighted_overlap(std::span<const GaussianRating> ratings) {
  require_pairs(ratings.size());
  const auto ranking = rank_by_conservative_score(ratings);
  return best_partner_by_overlap(ratings, ranking);
}

PairChoice select_max_partner_overlap_elo(std::span<const EloRating> scores) {
  require_pairs(scores.size());
  const auto ranking = rank_by_score(scores);
  return best_partner_by_gap(scores, ranking);
}

PairArgmax::PairArgmax(std::size_t item_count, ScoreFn score)
    : n_(item_count), score_(std::move(score)), rows_(item_count) {
  require_pairs(n_);
  for (std::size_t row = 0; row + 1 < n_; ++row) rebuild_row(row);
  update_best();
}

void PairArgmax::rebuild_row(std::size_t row) {
  RowBest best{row + 1, score_(row, row + 1)};
  for (std::size_t col = row + 2; col < n_; ++col) {
    const double value = score_(row, col);
    if (value > best.value) best = {col, value};
  }
  rows_[row] = best;
}

void PairArgmax::offer(std::size_t row, std::size_t column, double value) {
  RowBest& best = rows_[row];
  if (value > best.value || (value == best.value && column < best.column)) {
    best = {column, value};
  }
}

void PairArgmax::refresh(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  for (std::size_t row = 0; row < b; ++row) {
    if (row == a) continue;
    const RowBest old = rows_[row];
    const bool touches_a = row < a;
    const double va = touches_a ? score_(row, a) : 0.0;
    const double vb = score_(row, b);
    if (old.column == a || old.column == b) {
      // The previous winner changed; a rise keeps it ahead of the untouched
      // entries, a drop needs a rescan.
      const double v_old = old.column == a ? va : vb;
      if (v_old < old.value) {
        rebuild_row(row);
        continue;
      }
      rows_[row] = {old.column, v_old};
    }
    if (touches_a) offer(row, a, va);
    offer(row, b, vb);
  }
  if (a + 1 < n_) rebuild_row(a);
  if (b + 1 < n_) rebuild_row(b);
  update_best();
}

void PairArgmax::update_best() {
  std::size_t best_row = 0;
  for (std::size_t row = 1; row + 1 < n_; ++row) {
    if (rows_[row].value > rows_[best_row].value) best_row = row;
  }
  best_ = {best_row, rows_[best_row].column};
}

}  // namespace tssort
