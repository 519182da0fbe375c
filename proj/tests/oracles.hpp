#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the rating implementation.

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

inline double normal_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

/// Phi(x) = 1/2 + integral_0^x phi, composite Simpson with `intervals` panels.
inline double normal_cdf_simpson(double x, int intervals = 20000) {
  const double h = x / intervals;
  double sum = normal_density(0.0) + normal_density(x);
  for (int k = 1; k < intervals; ++k) sum += (k % 2 ? 4.0 : 2.0) * normal_density(k * h);
  return 0.5 + sum * h / 3.0;
}

struct Moments {
  double mu_i, sigma_i, mu_j, sigma_j;
};

enum class Observed { i_wins, j_wins, draw };

/// Posterior means and standard deviations of two skills with independent
/// Gaussian priors, after observing the outcome of a performance comparison
/// p_i - p_j ~ N(s_i - s_j, 2 beta^2) with draw margin `eps`. Computed by 2-D
/// trapezoidal integration over the skill plane (+-9 sigma per axis).
inline Moments posterior_by_quadrature(double mu_i, double sigma_i, double mu_j, double sigma_j,
                                       double beta, double eps, Observed observed,
                                       int points = 401) {
  const double perf = std::sqrt(2.0) * beta;
  auto Phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  auto likelihood = [&](double d) {
    switch (observed) {
      case Observed::i_wins:
        return Phi((d - eps) / perf);
      case Observed::j_wins:
        return Phi((-d - eps) / perf);
      case Observed::draw:
        if (eps == 0.0) return std::exp(-0.5 * (d / perf) * (d / perf));
        return Phi((eps - d) / perf) - Phi((-eps - d) / perf);
    }
    return 0.0;
  };

  const double span = 9.0;
  std::vector<double> xi(points), wi(points), xj(points), wj(points);
  for (int k = 0; k < points; ++k) {
    const double u = -span + 2.0 * span * k / (points - 1);
    const double edge = (k == 0 || k == points - 1) ? 0.5 : 1.0;
    xi[k] = mu_i + sigma_i * u;
    xj[k] = mu_j + sigma_j * u;
    wi[k] = edge * std::exp(-0.5 * u * u);
    wj[k] = edge * std::exp(-0.5 * u * u);
  }
  long double z = 0, si = 0, sii = 0, sj = 0, sjj = 0;
  for (int a = 0; a < points; ++a) {
    for (int b = 0; b < points; ++b) {
      const long double w = static_cast<long double>(wi[a]) * wj[b] * likelihood(xi[a] - xj[b]);
      z += w;
      si += w * xi[a];
      sii += w * xi[a] * xi[a];
      sj += w * xj[b];
      sjj += w * xj[b] * xj[b];
    }
  }
  const double mi = static_cast<double>(si / z);
  const double mj = static_cast<double>(sj / z);
  return {mi, std::sqrt(static_cast<double>(sii / z) - mi * mi), mj,
          std::sqrt(static_cast<double>(sjj / z) - mj * mj)};
}

/// All unordered pairs (i < j); the lexicographically first maximizer.
template <typename Score>
std::pair<std::size_t, std::size_t> brute_argmax(std::size_t n, Score score) {
  std::pair<std::size_t, std::size_t> best{0, 1};
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = score(i, j);
      if (v > best_value) {
        best_value = v;
        best = {i, j};
      }
    }
  }
  return best;
}

}  // namespace oracle
