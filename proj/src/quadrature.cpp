#include "bcop/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bcop/tensor.hpp"

namespace bcop {

GaussLegendreRule gauss_legendre(int order, double lo, double hi) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussLegendreRule rule{std::vector<double>(order), std::vector<double>(order)};
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const int roots = (order + 1) / 2;
  for (int i = 1; i <= roots; ++i) {
    // Newton on P_order, started from the Tricomi estimate of the i-th root.
    double z = std::cos(std::numbers::pi * (i - 0.25) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z_prev = z;
      z = z_prev - p1 / dp;
      if (std::abs(z - z_prev) <= 1e-15) break;
    }
    // Refresh the derivative at the converged root.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= order; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    dp = order * (z * p1 - p2) / (z * z - 1.0);

    const double w = 2.0 * half / ((1.0 - z * z) * dp * dp);
    rule.nodes[i - 1] = mid - half * z;
    rule.nodes[order - i] = mid + half * z;
    rule.weights[i - 1] = w;
    rule.weights[order - i] = w;
  }
  return rule;
}

double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lower, std::span<const double> upper, int order) {
  const int n = static_cast<int>(lower.size());
  if (upper.size() != lower.size())
    throw std::invalid_argument("integrate_box: bound dimensions differ");
  check_dimension(n);

  std::vector<GaussLegendreRule> rules;
  rules.reserve(n);
  for (int k = 0; k < n; ++k) rules.push_back(gauss_legendre(order, lower[k], upper[k]));

  const std::size_t count = ipow(order, n);
  std::vector<int> idx(n);
  std::vector<double> x(n);
  double total = 0.0;
  for (std::size_t f_idx = 0; f_idx < count; ++f_idx) {
    unravel(f_idx, order, idx);
    double w = 1.0;
    for (int k = 0; k < n; ++k) {
      x[k] = rules[k].nodes[idx[k]];
      w *= rules[k].weights[idx[k]];
    }
    total += w * f(x);
  }
  return total;
}

}  // namespace bcop
