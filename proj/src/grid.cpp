#include "bcop/grid.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bcop {

GridCopula::GridCopula(int m, int n, std::vector<double> values, CopulaDescriptor source,
                       GridSource kind)
    : m_(m), n_(n), values_(std::move(values)), source_(std::move(source)), kind_(kind) {
  if (m_ < 1) throw std::invalid_argument("GridCopula: degree must be >= 1");
  check_dimension(n_);
  if (values_.size() != ipow(m_ + 1, n_))
    throw std::invalid_argument("GridCopula: expected (m+1)^n values");
}

DeltaTensor::DeltaTensor(int m, int n, std::vector<double> masses)
    : m_(m), n_(n), masses_(std::move(masses)) {
  if (m_ < 1) throw std::invalid_argument("DeltaTensor: degree must be >= 1");
  check_dimension(n_);
  if (masses_.size() != ipow(m_, n_))
    throw std::invalid_argument("DeltaTensor: expected m^n masses");
}

double DeltaTensor::total() const { return std::accumulate(masses_.begin(), masses_.end(), 0.0); }

double DeltaTensor::min_mass() const { return *std::min_element(masses_.begin(), masses_.end()); }

bool ValidityReport::is_copula_within(double tol) const {
  return max_boundary_violation <= tol && min_cell_mass >= -tol &&
         std::abs(mass_total - 1.0) <= tol;
}

namespace {

void fill_node(const Copula& c, int m, std::size_t flat, std::vector<int>& idx,
               std::vector<double>& x, std::vector<double>& values) {
  unravel(flat, m + 1, idx);
  for (std::size_t k = 0; k < idx.size(); ++k) x[k] = static_cast<double>(idx[k]) / m;
  values[flat] = c(x);
}

void check_degree(int m) {
  if (m < 1) throw std::invalid_argument("degree must be >= 1, got " + std::to_string(m));
}

}  // namespace

namespace serial {

GridCopula sample_grid(const Copula& c, int m) {
  check_degree(m);
  const int n = c.dim();
  std::vector<double> values(ipow(m + 1, n));
  std::vector<int> idx(n);
  std::vector<double> x(n);
  for (std::size_t f = 0; f < values.size(); ++f) fill_node(c, m, f, idx, x, values);
  return GridCopula(m, n, std::move(values), c.descriptor());
}

}  // namespace serial

GridCopula sample_grid(const Copula& c, int m) {
  check_degree(m);
  const int n = c.dim();
  std::vector<double> values(ipow(m + 1, n));
  const auto count = static_cast<std::int64_t>(values.size());
#pragma omp parallel
  {
    std::vector<int> idx(n);
    std::vector<double> x(n);
#pragma omp for schedule(static)
    for (std::int64_t f = 0; f < count; ++f) fill_node(c, m, f, idx, x, values);
  }
  return GridCopula(m, n, std::move(values), c.descriptor());
}

DeltaTensor delta_tensor(const GridCopula& grid) {
  const int n = grid.dim();
  const int m = grid.degree();
  std::vector<int> shape(n, m + 1);
  std::vector<double> cur = grid.values();
  for (int axis = 0; axis < n; ++axis) {
    cur = difference_along(cur, shape, axis);
    shape[axis] = m;
  }
  return DeltaTensor(m, n, std::move(cur));
}

ValidityReport validate_copula(const GridCopula& grid, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("validate_copula: tolerance must be positive");
  const int n = grid.dim();
  const int m = grid.degree();
  ValidityReport report;

  std::vector<int> idx(n);
  const auto& values = grid.values();
  for (std::size_t f = 0; f < values.size(); ++f) {
    unravel(f, m + 1, idx);
    int zeros = 0;
    int non_top = 0;
    int free_axis = -1;
    for (int k = 0; k < n; ++k) {
      if (idx[k] == 0) ++zeros;
      if (idx[k] != m) {
        ++non_top;
        free_axis = k;
      }
    }
    double violation = 0.0;
    if (zeros > 0) {
      violation = std::abs(values[f]);
    } else if (non_top == 0) {
      violation = std::abs(values[f] - 1.0);
    } else if (non_top == 1) {
      violation = std::abs(values[f] - static_cast<double>(idx[free_axis]) / m);
    }
    report.max_boundary_violation = std::max(report.max_boundary_violation, violation);
  }

  const DeltaTensor deltas = delta_tensor(grid);
  report.min_cell_mass = deltas.min_mass();
  report.mass_total = deltas.total();
  return report;
}

std::vector<double> average_ranks(std::span<const double> column) {
  const std::size_t n = column.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
  std::vector<double> ranks(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && column[order[end]] == column[order[start]]) ++end;
    // 1-based ranks start+1 .. end share their mean.
    const double mean_rank = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t r = start; r < end; ++r) ranks[order[r]] = mean_rank;
    start = end;
  }
  return ranks;
}

namespace {

// Row-major pseudo-observations rank / (N + 1).
std::vector<double> pseudo_observations(const PointSet& rows) {
  const int n = rows.dim();
  const std::size_t count = rows.size();
  if (count < 2) throw std::invalid_argument("empirical copula needs at least 2 rows");
  if (n < 2) throw std::invalid_argument("empirical copula needs at least 2 columns");
  check_dimension(n);

  std::vector<double> pseudo(count * n);
  std::vector<double> column(count);
  for (int k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < count; ++r) column[r] = rows[r][k];
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    if (*lo == *hi)
      throw std::invalid_argument("empirical copula: column " + std::to_string(k + 1) +
                                  " is constant");
    const auto ranks = average_ranks(column);
    for (std::size_t r = 0; r < count; ++r)
      pseudo[r * n + k] = ranks[r] / static_cast<double>(count + 1);
  }
  return pseudo;
}

}  // namespace

Copula empirical_copula(const PointSet& rows) {
  const int n = rows.dim();
  auto pseudo = std::make_shared<const std::vector<double>>(pseudo_observations(rows));
  auto eval = [pseudo, n](std::span<const double> x) {
    const std::size_t count = pseudo->size() / n;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < count; ++r) {
      bool below = true;
      for (int k = 0; k < n && below; ++k) below = (*pseudo)[r * n + k] <= x[k];
      hits += below ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(count);
  };
  return Copula({"empirical", 0.0, n}, eval);
}

GridCopula empirical_copula_from_data(const PointSet& rows, int m) {
  check_degree(m);
  const int n = rows.dim();
  const std::size_t count = rows.size();
  const std::vector<double> pseudo = pseudo_observations(rows);

  // Histogram each row at its threshold node (smallest i with u_rk <= i_k / m
  // on every axis), then prefix-sum along every axis.
  std::vector<double> values(ipow(m + 1, n), 0.0);
  std::vector<int> idx(n);
  std::vector<int> threshold(n);
  for (std::size_t r = 0; r < count; ++r) {
    for (int k = 0; k < n; ++k) {
      const double u = pseudo[r * n + k];
      int t = static_cast<int>(std::ceil(u * m));
      // Guard the comparison against rounding in u * m.
      while (t > 0 && u <= static_cast<double>(t - 1) / m) --t;
      while (t < m && u > static_cast<double>(t) / m) ++t;
      threshold[k] = t;
    }
    values[ravel(threshold, m + 1)] += 1.0;
  }
  std::size_t inner = values.size();
  for (int axis = 0; axis < n; ++axis) {
    inner /= (m + 1);
    const std::size_t block = inner * (m + 1);
    for (std::size_t o = 0; o < values.size(); o += block)
      for (std::size_t j = 1; j <= static_cast<std::size_t>(m); ++j)
        for (std::size_t r = 0; r < inner; ++r)
          values[o + j * inner + r] += values[o + (j - 1) * inner + r];
  }
  for (double& v : values) v /= static_cast<double>(count);

  // Grounded faces and the all-ones corner.
  for (std::size_t f = 0; f < values.size(); ++f) {
    unravel(f, m + 1, idx);
    if (std::any_of(idx.begin(), idx.end(), [](int c) { return c == 0; })) values[f] = 0.0;
  }
  values.back() = 1.0;

  return GridCopula(m, n, std::move(values), {"empirical", 0.0, n}, GridSource::empirical);
}

}  // namespace bcop
