#pragma once

#include <span>
#include <vector>

namespace bcop {

/// Grid node / tensor basis index; each component in {0, ..., m}.
using MultiIndex = std::vector<int>;
/// A point of the closed unit cube.
using UnitPoint = std::vector<double>;

/// Largest degree evaluated with an exact Pascal-row binomial; higher degrees
/// go through log-space.
inline constexpr int kDirectDegreeLimit = 60;

/// b_{i,m}(t) = C(m,i) t^i (1-t)^(m-i).
///
/// Indices outside {0, ..., m} evaluate to exactly 0, so b_{-1,m-1} and
/// b_{m,m-1} need no special-casing in derivative formulas. The endpoints are
/// exact: b_{i,m}(0) = [i == 0] and b_{i,m}(1) = [i == m]. Stable for m in the
/// thousands.
///
/// Throws std::domain_error if m < 1 or t is outside [0,1].
double bernstein_1d(int i, int m, double t);

/// d/dt b_{i,m}(t) = m (b_{i-1,m-1}(t) - b_{i,m-1}(t)).
double bernstein_1d_derivative(int i, int m, double t);

/// B_{i,m}(x) = prod_k b_{i_k,m}(x_k). Throws std::invalid_argument when the
/// index and point dimensions differ.
double bernstein_nd(std::span<const int> i, int m, std::span<const double> x);

/// Exact value of the integral of any B_{i,m} over [0,1]^n: 1/(m+1)^n.
double basis_integral_value(int n, int m);

/// All m+1 basis values at t: out[i] = b_{i,m}(t).
std::vector<double> basis_row(int m, double t);

/// out[i] = d/dt b_{i,m}(t), i = 0..m.
std::vector<double> basis_derivative_row(int m, double t);

/// Binomial coefficient as a double (exact row for m <= kDirectDegreeLimit).
double binomial(int m, int i);

namespace detail {
// Same as bernstein_1d but admits degree 0 (b_{0,0} = 1) and skips checks.
double bernstein_unchecked(int i, int m, double t);
}  // namespace detail

}  // namespace bcop
