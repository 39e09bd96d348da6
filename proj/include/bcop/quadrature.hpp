#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bcop {

struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// `order`-point Gauss-Legendre rule on [lo, hi]; exact for polynomials of
/// degree <= 2*order - 1.
GaussLegendreRule gauss_legendre(int order, double lo = 0.0, double hi = 1.0);

/// Tensor-product Gauss-Legendre integral of f over the box [lower, upper].
double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lower, std::span<const double> upper, int order);

}  // namespace bcop
