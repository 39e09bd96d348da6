#include "bcop/operator.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "bcop/quadrature.hpp"

namespace bcop {

namespace {

void check_point(int n, std::span<const double> x) {
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(n));
}

std::vector<std::vector<double>> axis_weights(int m, std::span<const double> x) {
  std::vector<std::vector<double>> w;
  w.reserve(x.size());
  for (double t : x) w.push_back(basis_row(m, t));
  return w;
}

}  // namespace

double bernstein_approx(const GridCopula& grid, std::span<const double> x) {
  check_point(grid.dim(), x);
  const auto w = axis_weights(grid.degree(), x);
  return contract(grid.values(), grid.extent(), w);
}

BernsteinCopula::BernsteinCopula(GridCopula grid, ValidityPolicy policy, double tol) {
  auto deltas = delta_tensor(grid);
  ValidityReport report = validate_copula(grid, tol);
  if (policy == ValidityPolicy::assert_valid && !report.is_copula_within(tol)) {
    throw ValidityError(grid.source().label() + " at m=" + std::to_string(grid.degree()) +
                        " is not a copula: boundary violation " +
                        std::to_string(report.max_boundary_violation) + ", min cell mass " +
                        std::to_string(report.min_cell_mass) + ", total mass " +
                        std::to_string(report.mass_total));
  }
  state_ = std::make_shared<const State>(State{std::move(grid), std::move(deltas), report});
}

double BernsteinCopula::operator()(std::span<const double> x) const {
  return bernstein_approx(state_->grid, x);
}

double BernsteinCopula::density(std::span<const double> x) const {
  check_point(dim(), x);
  const int m = degree();
  const auto w = axis_weights(m - 1, x);
  return std::pow(static_cast<double>(m), dim()) * contract(state_->deltas.masses(), m, w);
}

double BernsteinCopula::partial(int axis, std::span<const double> x) const {
  check_point(dim(), x);
  if (axis < 0 || axis >= dim())
    throw std::out_of_range("partial: axis " + std::to_string(axis) + " out of range");
  auto w = axis_weights(degree(), x);
  w[axis] = basis_derivative_row(degree(), x[axis]);
  return contract(state_->grid.values(), state_->grid.extent(), w);
}

Copula BernsteinCopula::as_copula() const {
  auto self = *this;
  CopulaDescriptor desc{"bernstein", static_cast<double>(degree()), dim()};
  return Copula(
      desc, [self](std::span<const double> x) { return self(x); },
      [self](int axis, std::span<const double> x) { return self.partial(axis, x); });
}

BernsteinCopula make_bernstein_copula(const Copula& c, int m) {
  return BernsteinCopula(sample_grid(c, m), ValidityPolicy::assert_valid);
}

BernsteinCopula make_bernstein_copula(GridCopula grid) {
  const auto policy = grid.kind() == GridSource::analytic ? ValidityPolicy::assert_valid
                                                          : ValidityPolicy::report_only;
  return BernsteinCopula(std::move(grid), policy);
}

double density(const BernsteinCopula& b, std::span<const double> x) { return b.density(x); }

double partial_derivative(const BernsteinCopula& b, int axis, std::span<const double> x) {
  return b.partial(axis, x);
}

namespace {

template <typename Fn>
std::vector<double> map_serial(const PointSet& points, Fn&& fn) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = fn(points[i]);
  return out;
}

template <typename Fn>
std::vector<double> map_parallel(const PointSet& points, Fn&& fn) {
  std::vector<double> out(points.size());
  const auto count = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) out[i] = fn(points[i]);
  return out;
}

}  // namespace

std::vector<double> evaluate_points(const BernsteinCopula& b, const PointSet& points) {
  return map_parallel(points, [&](std::span<const double> x) { return b(x); });
}
std::vector<double> density_points(const BernsteinCopula& b, const PointSet& points) {
  return map_parallel(points, [&](std::span<const double> x) { return b.density(x); });
}
std::vector<double> evaluate_points(const Copula& c, const PointSet& points) {
  return map_parallel(points, [&](std::span<const double> x) { return c(x); });
}

namespace serial {
std::vector<double> evaluate_points(const BernsteinCopula& b, const PointSet& points) {
  return map_serial(points, [&](std::span<const double> x) { return b(x); });
}
std::vector<double> density_points(const BernsteinCopula& b, const PointSet& points) {
  return map_serial(points, [&](std::span<const double> x) { return b.density(x); });
}
std::vector<double> evaluate_points(const Copula& c, const PointSet& points) {
  return map_serial(points, [&](std::span<const double> x) { return c(x); });
}
}  // namespace serial

double integrate_density(const BernsteinCopula& b, int order) {
  const UnitPoint lo(b.dim(), 0.0);
  const UnitPoint hi(b.dim(), 1.0);
  return integrate_box([&](std::span<const double> x) { return b.density(x); }, lo, hi, order);
}

std::vector<ConvergenceRow> sup_error_study(const Copula& c, std::span<const int> degrees,
                                            int grid_res) {
  if (grid_res < 2) throw std::invalid_argument("sup_error_study: grid_res must be >= 2");
  const PointSet lattice = unit_lattice(c.dim(), grid_res);
  const auto exact = evaluate_points(c, lattice);

  std::vector<ConvergenceRow> rows;
  for (int m : degrees) {
    const auto start = std::chrono::steady_clock::now();
    const BernsteinCopula b = make_bernstein_copula(c, m);
    const auto approx = evaluate_points(b, lattice);
    ConvergenceRow row;
    row.m = m;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < approx.size(); ++i) {
      const double err = std::abs(approx[i] - exact[i]);
      if (err > row.sup_error) {
        row.sup_error = err;
        arg = i;
      }
    }
    row.argmax_point.assign(lattice[arg].begin(), lattice[arg].end());
    row.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DerivativeErrorRow> derivative_error_study(const Copula& c,
                                                       std::span<const int> degrees, int axis,
                                                       const PointSet& points) {
  if (!c.has_partials())
    throw std::logic_error(c.descriptor().label() + " has no analytic partial derivatives");
  if (points.dim() != c.dim())
    throw std::invalid_argument("derivative_error_study: point dimension mismatch");
  for (double v : points.coords())
    if (!(v > 0.0 && v < 1.0))
      throw std::invalid_argument("derivative_error_study: points must be interior");

  std::vector<DerivativeErrorRow> rows;
  for (int m : degrees) {
    const BernsteinCopula b = make_bernstein_copula(c, m);
    for (std::size_t p = 0; p < points.size(); ++p) {
      DerivativeErrorRow row;
      row.m = m;
      row.point.assign(points[p].begin(), points[p].end());
      row.axis = axis;
      row.approx = b.partial(axis, points[p]);
      row.exact = c.partial(axis, points[p]);
      row.error = std::abs(row.approx - row.exact);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace bcop
