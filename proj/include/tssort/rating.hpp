#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace tssort {

/// Result of one pairwise comparison, seen from the first item of the pair.
enum class Outcome { first_wins, second_wins, draw };

Outcome invert(Outcome outcome);
std::string to_string(Outcome outcome);

/// Raised when a rating update cannot be evaluated in floating point.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gaussian belief (mu, sigma) about an item's skill.
struct GaussianRating {
  double mu = 25.0;
  double sigma = 25.0 / 3.0;

  bool valid() const { return std::isfinite(mu) && std::isfinite(sigma) && sigma > 0.0; }
  friend bool operator==(const GaussianRating&, const GaussianRating&) = default;
};

struct EloRating {
  double score = 1000.0;

  bool valid() const { return std::isfinite(score); }
  friend bool operator==(const EloRating&, const EloRating&) = default;
};

struct TrueSkillParams {
  double beta = 25.0 / 6.0;
  double mu0 = 25.0;
  double sigma0 = 25.0 / 3.0;
  double epsilon = 0.0;  // draw margin, in performance units

  bool valid() const;
  GaussianRating initial() const { return {mu0, sigma0}; }
};

struct EloParams {
  double k_factor = 32.0;
  // 200 / sqrt(2): a 200 point lead gives an expected win of Phi(1).
  double beta = 141.42135623730951;
  double initial_score = 1000.0;

  bool valid() const;
  EloRating initial() const { return {initial_score}; }
};

/// Phi((si - sj) / sqrt(2 beta^2)).
double elo_expected_win(EloRating si, EloRating sj, const EloParams& params);

/// Linearized Elo update. Returns (si + delta, sj - delta).
std::pair<EloRating, EloRating> elo_update(EloRating si, EloRating sj, Outcome outcome,
                                           const EloParams& params);

/// Two-player TrueSkill update without dynamics. Outcome is from i's side.
std::pair<GaussianRating, GaussianRating> trueskill_update(const GaussianRating& ri,
                                                           const GaussianRating& rj,
                                                           Outcome outcome,
                                                           const TrueSkillParams& params);

/// Pessimistic estimate mu - 3 sigma.
inline double conservative_score(const GaussianRating& r) { return r.mu - 3.0 * r.sigma; }

/// Probability that two items with the given beliefs draw.
double draw_probability(const GaussianRating& ri, const GaussianRating& rj, double beta);

}  // namespace tssort
