#include "tssort/normal.hpp"

#include <cmath>
#include <numbers>

namespace tssort {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Below this argument the direct ratio loses accuracy (or underflows), and the
// continued fraction for the Mills ratio converges in a few dozen terms.
constexpr double kTailSwitch = 5.0;

// Margins smaller than this are treated as the eps -> 0 limit of the draw
// terms; the neglected terms are O(eps^2).
constexpr double kZeroMargin = 1e-6;

double upper_tail(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double mills_ratio(double z) {
  if (z < kTailSwitch) {
    return upper_tail(z) / std_normal_pdf(z);
  }
  // Modified Lentz evaluation of 1 / (z + 1/(z + 2/(z + 3/(z + ...)))).
  constexpr double kTiny = 1e-300;
  double f = z;
  double c = z;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = z + k * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = z + k / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

double v_win(double t, double eps) {
  const double x = t - eps;
  if (x > -kTailSwitch) {
    return std_normal_pdf(x) / std_normal_cdf(x);
  }
  // Phi(x) = phi(x) * R(-x), so phi/Phi never has to be formed explicitly.
  return 1.0 / mills_ratio(-x);
}

double w_win(double t, double eps) {
  const double v = v_win(t, eps);
  return v * (v + t - eps);
}

double v_draw(double t, double eps) {
  if (t < 0.0) return -v_draw(-t, eps);
  if (eps < kZeroMargin) return -t;
  const double a = t - eps;
  const double b = t + eps;
  if (a > kTailSwitch) {
    // Everything scaled by phi(a); phi(b) / phi(a) = exp(-2 t eps).
    const double r = std::exp(-2.0 * t * eps);
    return (r - 1.0) / (mills_ratio(a) - r * mills_ratio(b));
  }
  return (std_normal_pdf(b) - std_normal_pdf(a)) / (upper_tail(a) - upper_tail(b));
}

double w_draw(double t, double eps) {
  t = std::abs(t);
  if (eps < kZeroMargin) return 1.0;
  const double a = t - eps;
  const double b = t + eps;
  const double v = v_draw(t, eps);
  if (a > kTailSwitch) {
    const double r = std::exp(-2.0 * t * eps);
    return v * v + (b * r - a) / (mills_ratio(a) - r * mills_ratio(b));
  }
  return v * v + (b * std_normal_pdf(b) - a * std_normal_pdf(a)) / (upper_tail(a) - upper_tail(b));
}

}  // namespace tssort
