#include "tssort/session.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tssort {

namespace {

PairArgmax::ScoreFn make_score_fn(Algorithm algorithm, const GaussianRating* ratings,
                                  double beta) {
  if (algorithm == Algorithm::tssort_draw) {
    return [ratings, beta](std::size_t i, std::size_t j) {
      return draw_probability(ratings[i], ratings[j], beta);
    };
  }
  return [ratings](std::size_t i, std::size_t j) {
    return weighted_overlap(ratings[i], ratings[j]);
  };
}

bool full_pair(Algorithm algorithm) {
  return algorithm == Algorithm::tssort_draw || algorithm == Algorithm::tssort_wover;
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::tssort_draw:
      return "tssort_draw";
    case Algorithm::tssort_wover:
      return "tssort_wover";
    case Algorithm::tssort_partner_wover:
      return "tssort_partner_wover";
    case Algorithm::elosort_partner:
      return "elosort_partner";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Algorithm a : {Algorithm::tssort_draw, Algorithm::tssort_wover,
                      Algorithm::tssort_partner_wover, Algorithm::elosort_partner}) {
    if (lower == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

bool uses_trueskill(Algorithm algorithm) { return algorithm != Algorithm::elosort_partner; }

std::size_t comparison_budget(std::size_t item_count, double multiplier) {
  if (item_count < 2) throw std::invalid_argument("a sort needs at least two items");
  if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
    throw std::invalid_argument("budget multiplier must be positive");
  }
  const double n = static_cast<double>(item_count);
  // log2 is exact for powers of two, so n*log2(n) is an exact integer there.
  return static_cast<std::size_t>(std::ceil(multiplier * n * std::log2(n)));
}

SortSession::SortSession(std::size_t item_count, Algorithm algorithm, SessionParams params)
    : item_count_(item_count),
      algorithm_(algorithm),
      params_(params),
      budget_(comparison_budget(item_count, params.budget_multiplier)),
      order_(item_count) {
  if (uses_trueskill(algorithm_)) {
    if (!params_.trueskill.valid()) throw std::invalid_argument("invalid TrueSkill parameters");
    gaussian_.assign(item_count_, params_.trueskill.initial());
  } else {
    if (!params_.elo.valid()) throw std::invalid_argument("invalid Elo parameters");
    elo_.assign(item_count_, params_.elo.initial());
  }
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (full_pair(algorithm_)) {
    argmax_ = std::make_unique<PairArgmax>(
        item_count_, make_score_fn(algorithm_, gaussian_.data(), params_.trueskill.beta));
  }
  select_next();
}

SortSession::SortSession(const SortSession& other)
    : item_count_(other.item_count_),
      algorithm_(other.algorithm_),
      params_(other.params_),
      budget_(other.budget_),
      gaussian_(other.gaussian_),
      elo_(other.elo_),
      order_(other.order_),
      history_(other.history_),
      next_(other.next_) {
  if (other.argmax_) {
    argmax_ = std::make_unique<PairArgmax>(*other.argmax_);
    argmax_->rebind(make_score_fn(algorithm_, gaussian_.data(), params_.trueskill.beta));
  }
}

SortSession& SortSession::operator=(const SortSession& other) {
  if (this != &other) {
    SortSession copy(other);
    *this = std::move(copy);
  }
  return *this;
}

// The score function captures the rating buffer, which a move transfers intact.
SortSession::SortSession(SortSession&&) noexcept = default;
SortSession& SortSession::operator=(SortSession&&) noexcept = default;
SortSession::~SortSession() = default;

SortSession SortSession::replay(std::size_t item_count, Algorithm algorithm,
                                SessionParams params, std::span<const HistoryEntry> history) {
  SortSession session(item_count, algorithm, params);
  for (const auto& entry : history) session.apply_outcome(entry.pair, entry.outcome);
  return session;
}

PairChoice SortSession::next_pair() const {
  if (is_finished()) throw std::logic_error("sort session is finished");
  return next_;
}

void SortSession::apply_outcome(PairChoice pair, Outcome outcome) {
  if (is_finished()) throw std::logic_error("sort session is finished");
  if (!(pair == next_)) {
    throw std::invalid_argument("pair (" + std::to_string(pair.first) + ", " +
                                std::to_string(pair.second) + ") is not the issued pair");
  }
  const std::size_t i = pair.first;
  const std::size_t j = pair.second;
  if (uses_trueskill(algorithm_)) {
    std::tie(gaussian_[i], gaussian_[j]) =
        trueskill_update(gaussian_[i], gaussian_[j], outcome, params_.trueskill);
  } else {
    std::tie(elo_[i], elo_[j]) = elo_update(elo_[i], elo_[j], outcome, params_.elo);
  }
  history_.push_back({pair, outcome});
  reposition(i, j);
  if (argmax_) argmax_->refresh(i, j);
  select_next();
}

double SortSession::score(std::size_t item) const {
  if (uses_trueskill(algorithm_)) return conservative_score(gaussian_.at(item));
  return elo_.at(item).score;
}

bool SortSession::ranks_before(std::size_t a, std::size_t b) const {
  const double sa = score(a);
  const double sb = score(b);
  if (sa != sb) return sa > sb;
  return a < b;
}

void SortSession::reposition(std::size_t a, std::size_t b) {
  // Both must leave before either is reinserted; the binary search needs the
  // remaining ranking to be sorted.
  std::erase_if(order_, [&](std::size_t item) { return item == a || item == b; });
  auto before = [&](std::size_t lhs, std::size_t rhs) { return ranks_before(lhs, rhs); };
  for (std::size_t item : {a, b}) {
    order_.insert(std::lower_bound(order_.begin(), order_.end(), item, before), item);
  }
}

void SortSession::select_next() {
  switch (algorithm_) {
    case Algorithm::tssort_draw:
    case Algorithm::tssort_wover:
      next_ = argmax_->best();
      break;
    case Algorithm::tssort_partner_wover:
      next_ = best_partner_by_overlap(gaussian_, order_);
      break;
    case Algorithm::elosort_partner:
      next_ = best_partner_by_gap(elo_, order_);
      break;
  }
}

}  // namespace tssort
