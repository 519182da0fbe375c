#include "tssort/rating.hpp"

#include <cmath>

#include "tssort/normal.hpp"

namespace tssort {

Outcome invert(Outcome outcome) {
  switch (outcome) {
    case Outcome::first_wins:
      return Outcome::second_wins;
    case Outcome::second_wins:
      return Outcome::first_wins;
    case Outcome::draw:
      return Outcome::draw;
  }
  return outcome;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::first_wins:
      return "first";
    case Outcome::second_wins:
      return "second";
    case Outcome::draw:
      return "draw";
  }
  return "?";
}

bool TrueSkillParams::valid() const {
  return std::isfinite(beta) && beta > 0.0 && std::isfinite(mu0) && std::isfinite(sigma0) &&
         sigma0 > 0.0 && std::isfinite(epsilon) && epsilon >= 0.0;
}

bool EloParams::valid() const {
  return std::isfinite(k_factor) && k_factor > 0.0 && std::isfinite(beta) && beta > 0.0 &&
         std::isfinite(initial_score);
}

double elo_expected_win(EloRating si, EloRating sj, const EloParams& params) {
  if (!si.valid() || !sj.valid()) throw std::invalid_argument("elo rating must be finite");
  if (!params.valid()) throw std::invalid_argument("invalid Elo parameters");
  return std_normal_cdf((si.score - sj.score) / std::sqrt(2.0 * params.beta * params.beta));
}

std::pair<EloRating, EloRating> elo_update(EloRating si, EloRating sj, Outcome outcome,
                                           const EloParams& params) {
  double y = 0.0;
  switch (outcome) {
    case Outcome::first_wins:
      y = 1.0;
      break;
    case Outcome::second_wins:
      y = -1.0;
      break;
    case Outcome::draw:
      y = 0.0;
      break;
  }
  const double delta = params.k_factor * ((y + 1.0) / 2.0 - elo_expected_win(si, sj, params));
  return {EloRating{si.score + delta}, EloRating{sj.score - delta}};
}

std::pair<GaussianRating, GaussianRating> trueskill_update(const GaussianRating& ri,
                                                           const GaussianRating& rj,
                                                           Outcome outcome,
                                                           const TrueSkillParams& params) {
  if (!ri.valid() || !rj.valid()) throw std::invalid_argument("gaussian rating needs finite mu and sigma > 0");
  if (!params.valid()) throw std::invalid_argument("invalid TrueSkill parameters");

  const double var_i = ri.sigma * ri.sigma;
  const double var_j = rj.sigma * rj.sigma;
  const double c2 = 2.0 * params.beta * params.beta + var_i + var_j;
  const double c = std::sqrt(c2);
  const double eps = params.epsilon / c;

  // Orient as (winner, loser) for decisive games; draws keep i first.
  const bool i_first = outcome != Outcome::second_wins;
  const GaussianRating& hi = i_first ? ri : rj;
  const GaussianRating& lo = i_first ? rj : ri;
  const double t = (hi.mu - lo.mu) / c;

  double v = 0.0;
  double w = 0.0;
  if (outcome == Outcome::draw) {
    v = v_draw(t, eps);
    w = w_draw(t, eps);
  } else {
    v = v_win(t, eps);
    w = w_win(t, eps);
  }
  if (!std::isfinite(v) || !std::isfinite(w)) {
    throw NumericError("trueskill update degenerate at t=" + std::to_string(t));
  }

  auto posterior = [&](const GaussianRating& r, double sign) {
    const double var = r.sigma * r.sigma;
    GaussianRating out;
    out.mu = r.mu + sign * (var / c) * v;
    out.sigma = std::sqrt(var * (1.0 - (var / c2) * w));
    return out;
  };
  GaussianRating new_hi = posterior(hi, +1.0);
  GaussianRating new_lo = posterior(lo, -1.0);
  if (!new_hi.valid() || !new_lo.valid()) {
    throw NumericError("trueskill update produced an invalid rating");
  }
  if (i_first) return {new_hi, new_lo};
  return {new_lo, new_hi};
}

double draw_probability(const GaussianRating& ri, const GaussianRating& rj, double beta) {
  const double two_beta2 = 2.0 * beta * beta;
  const double c2 = two_beta2 + (ri.sigma * ri.sigma + rj.sigma * rj.sigma);
  const double diff = ri.mu - rj.mu;
  return std::sqrt(two_beta2 / c2) * std::exp(-(diff * diff) / (2.0 * c2));
}

}  // namespace tssort
