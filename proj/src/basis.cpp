#include "bcop/basis.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bcop {

namespace {

using PascalTable =
    std::array<std::array<double, kDirectDegreeLimit + 1>, kDirectDegreeLimit + 1>;

const PascalTable& pascal() {
  static const PascalTable table = [] {
    PascalTable t{};
    for (int m = 0; m <= kDirectDegreeLimit; ++m) {
      t[m][0] = 1.0;
      t[m][m] = 1.0;
      for (int i = 1; i < m; ++i) t[m][i] = t[m - 1][i - 1] + t[m - 1][i];
    }
    return t;
  }();
  return table;
}

void check_args(int m, double t) {
  if (m < 1) throw std::domain_error("bernstein: degree must be >= 1, got " + std::to_string(m));
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("bernstein: argument outside [0,1]: " + std::to_string(t));
}

}  // namespace

double binomial(int m, int i) {
  if (i < 0 || i > m) return 0.0;
  if (m <= kDirectDegreeLimit) return pascal()[m][i];
  return std::exp(std::lgamma(m + 1.0) - std::lgamma(i + 1.0) - std::lgamma(m - i + 1.0));
}

namespace detail {

double bernstein_unchecked(int i, int m, double t) {
  if (i < 0 || i > m) return 0.0;
  // Endpoints exactly; avoids 0 * log(0) below.
  if (t == 0.0) return i == 0 ? 1.0 : 0.0;
  if (t == 1.0) return i == m ? 1.0 : 0.0;
  if (m <= kDirectDegreeLimit) {
    return pascal()[m][i] * std::pow(t, i) * std::pow(1.0 - t, m - i);
  }
  const double log_b = std::lgamma(m + 1.0) - std::lgamma(i + 1.0) - std::lgamma(m - i + 1.0) +
                       i * std::log(t) + (m - i) * std::log1p(-t);
  return std::exp(log_b);
}

}  // namespace detail

double bernstein_1d(int i, int m, double t) {
  check_args(m, t);
  return detail::bernstein_unchecked(i, m, t);
}

double bernstein_1d_derivative(int i, int m, double t) {
  check_args(m, t);
  return m * (detail::bernstein_unchecked(i - 1, m - 1, t) -
              detail::bernstein_unchecked(i, m - 1, t));
}

double bernstein_nd(std::span<const int> i, int m, std::span<const double> x) {
  if (i.size() != x.size())
    throw std::invalid_argument("bernstein_nd: index has dimension " + std::to_string(i.size()) +
                                " but point has " + std::to_string(x.size()));
  double prod = 1.0;
  for (std::size_t k = 0; k < i.size(); ++k) prod *= bernstein_1d(i[k], m, x[k]);
  return prod;
}

double basis_integral_value(int n, int m) {
  if (n < 1) throw std::domain_error("basis_integral_value: dimension must be >= 1");
  if (m < 1) throw std::domain_error("basis_integral_value: degree must be >= 1");
  return 1.0 / std::pow(m + 1.0, n);
}

std::vector<double> basis_row(int m, double t) {
  if (m < 0) throw std::domain_error("basis_row: negative degree");
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("basis_row: argument outside [0,1]");
  std::vector<double> row(m + 1);
  for (int i = 0; i <= m; ++i) row[i] = detail::bernstein_unchecked(i, m, t);
  return row;
}

std::vector<double> basis_derivative_row(int m, double t) {
  check_args(m, t);
  const auto lower = basis_row(m - 1, t);
  std::vector<double> row(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double left = i > 0 ? lower[i - 1] : 0.0;
    const double right = i < m ? lower[i] : 0.0;
    row[i] = m * (left - right);
  }
  return row;
}

}  // namespace bcop
