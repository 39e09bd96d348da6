#pragma once

#include <span>
#include <vector>

#include "bcop/copula.hpp"
#include "bcop/tensor.hpp"

namespace bcop {

enum class GridSource { analytic, empirical };

/// Copula values C(i/m) at every node of the (m+1)^n grid, row-major.
class GridCopula {
 public:
  GridCopula(int m, int n, std::vector<double> values, CopulaDescriptor source,
             GridSource kind = GridSource::analytic);

  int degree() const { return m_; }
  int dim() const { return n_; }
  int extent() const { return m_ + 1; }
  const std::vector<double>& values() const { return values_; }
  double at(std::span<const int> index) const { return values_[ravel(index, m_ + 1)]; }
  const CopulaDescriptor& source() const { return source_; }
  GridSource kind() const { return kind_; }

 private:
  int m_;
  int n_;
  std::vector<double> values_;
  CopulaDescriptor source_;
  GridSource kind_;
};

/// Cell masses Delta^n_{j,m} C over the m^n grid cells, row-major.
class DeltaTensor {
 public:
  DeltaTensor(int m, int n, std::vector<double> masses);

  int degree() const { return m_; }
  int dim() const { return n_; }
  const std::vector<double>& masses() const { return masses_; }
  double at(std::span<const int> index) const { return masses_[ravel(index, m_)]; }
  double total() const;
  double min_mass() const;

 private:
  int m_;
  int n_;
  std::vector<double> masses_;
};

struct ValidityReport {
  double max_boundary_violation = 0.0;  // zero faces and uniform margins at nodes
  double min_cell_mass = 0.0;
  double mass_total = 0.0;

  bool is_copula_within(double tol) const;
};

/// Tolerance below zero tolerated on cell masses as inclusion-exclusion roundoff.
inline constexpr double kMassRoundoff = 1e-14;

/// values[i] = C(i/m) for every node. Evaluated in parallel; the result does
/// not depend on thread count.
GridCopula sample_grid(const Copula& c, int m);

/// n nested first differences of the grid values.
DeltaTensor delta_tensor(const GridCopula& grid);

/// Checks zero faces, node margins and nonnegative cell masses. Throws
/// std::invalid_argument if tol <= 0.
ValidityReport validate_copula(const GridCopula& grid, double tol);

/// Rank-based empirical copula on the grid. Pseudo-observations are
/// average-rank / (N + 1); values[i] = #{rows with u_j <= i_j / m for all j} / N.
///
/// Throws std::invalid_argument with fewer than 2 rows, fewer than 2 columns,
/// or a constant column.
GridCopula empirical_copula_from_data(const PointSet& rows, int m);

/// The empirical copula as a function: x -> #{rows with u_j <= x_j for all j} / N,
/// with the same pseudo-observations as empirical_copula_from_data. No
/// partials, no sampler.
Copula empirical_copula(const PointSet& rows);

/// Average ranks (1-based) of one column; ties share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> column);

namespace serial {
GridCopula sample_grid(const Copula& c, int m);
}  // namespace serial

}  // namespace bcop
