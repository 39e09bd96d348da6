#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "bcop/copula.hpp"
#include "bcop/grid.hpp"
#include "bcop/tensor.hpp"

namespace bcop {

/// sum_i values[i] prod_k b_{i_k,m}(x_k), by per-axis weight vectors and a
/// tensor contraction: O(n m + (m+1)^n) per point.
double bernstein_approx(const GridCopula& grid, std::span<const double> x);

enum class ValidityPolicy { assert_valid, report_only };

/// Thrown when a grid that must be a copula fails validation.
class ValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerance used when asserting validity of analytic sources.
inline constexpr double kValidityTolerance = 1e-10;

/// The Bernstein copula C_m: grid coefficients plus cached cell masses.
/// Immutable; copies share state.
class BernsteinCopula {
 public:
  /// Validity is asserted or only reported according to `policy`; asserting
  /// throws ValidityError when the grid fails validate_copula(grid, tol).
  BernsteinCopula(GridCopula grid, ValidityPolicy policy, double tol = kValidityTolerance);

  int degree() const { return state_->grid.degree(); }
  int dim() const { return state_->grid.dim(); }
  const GridCopula& grid() const { return state_->grid; }
  const DeltaTensor& deltas() const { return state_->deltas; }
  const ValidityReport& validity() const { return state_->report; }
  const CopulaDescriptor& source() const { return state_->grid.source(); }

  double operator()(std::span<const double> x) const;

  /// Mixed partial d^n C_m / dx_1 ... dx_n:
  /// m^n sum_j Delta_j prod_k b_{j_k,m-1}(x_k).
  double density(std::span<const double> x) const;

  /// dC_m/dx_axis (0-based axis).
  double partial(int axis, std::span<const double> x) const;

  /// C_m wrapped as a Copula (eval and partials; no sampler).
  Copula as_copula() const;

 private:
  struct State {
    GridCopula grid;
    DeltaTensor deltas;
    ValidityReport report;
  };
  std::shared_ptr<const State> state_;
};

/// Samples C on the degree-m grid and builds C_m, asserting validity.
BernsteinCopula make_bernstein_copula(const Copula& c, int m);

/// Builds C_m from an existing grid: asserted for analytic grids, reported
/// for empirical ones.
BernsteinCopula make_bernstein_copula(GridCopula grid);

double density(const BernsteinCopula& b, std::span<const double> x);
double partial_derivative(const BernsteinCopula& b, int axis, std::span<const double> x);

/// Point-batch kernels, parallel over points. Results match the serial
/// versions exactly.
std::vector<double> evaluate_points(const BernsteinCopula& b, const PointSet& points);
std::vector<double> density_points(const BernsteinCopula& b, const PointSet& points);
std::vector<double> evaluate_points(const Copula& c, const PointSet& points);

namespace serial {
std::vector<double> evaluate_points(const BernsteinCopula& b, const PointSet& points);
std::vector<double> density_points(const BernsteinCopula& b, const PointSet& points);
std::vector<double> evaluate_points(const Copula& c, const PointSet& points);
}  // namespace serial

/// Tensor Gauss-Legendre integral of the density over [0,1]^n; order
/// m per axis integrates it exactly.
double integrate_density(const BernsteinCopula& b, int order);

struct ConvergenceRow {
  int m = 0;
  double sup_error = 0.0;
  UnitPoint argmax_point;
  double elapsed_ms = 0.0;
};

/// For each degree, the max of |C_m - C| over the (grid_res+1)^n lattice.
/// Rows come back in the order of `degrees`.
std::vector<ConvergenceRow> sup_error_study(const Copula& c, std::span<const int> degrees,
                                            int grid_res);

struct DerivativeErrorRow {
  int m = 0;
  UnitPoint point;
  int axis = 0;
  double approx = 0.0;
  double exact = 0.0;
  double error = 0.0;
};

/// |dC_m/dx_axis - dC/dx_axis| per (degree, point). Points must be strictly
/// inside the cube; throws std::logic_error when c has no analytic partials.
std::vector<DerivativeErrorRow> derivative_error_study(const Copula& c,
                                                       std::span<const int> degrees, int axis,
                                                       const PointSet& points);

}  // namespace bcop
