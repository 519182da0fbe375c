#pragma once

namespace tssort {

double std_normal_pdf(double x);

/// Standard normal CDF, Phi(x). Accurate to ~1e-15 absolute over the whole
/// real line; returns exactly 0 or 1 only where the true value underflows.
double std_normal_cdf(double x);

/// Mills ratio R(z) = (1 - Phi(z)) / phi(z) for z >= 0. Stays finite for
/// arbitrarily large z where both numerator and denominator underflow.
double mills_ratio(double z);

/// Truncated-Gaussian correction terms of the two-player TrueSkill update.
/// `t` is the normalized mean difference (winner minus loser for decisive
/// outcomes) and `eps` the normalized draw margin.
double v_win(double t, double eps);
double w_win(double t, double eps);
double v_draw(double t, double eps);
double w_draw(double t, double eps);

}  // namespace tssort
