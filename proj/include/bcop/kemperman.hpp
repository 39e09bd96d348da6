#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcop/copula.hpp"
#include "bcop/operator.hpp"
#include "bcop/rng.hpp"
#include "bcop/tensor.hpp"

// Order-statistics sampler for Bernstein copulas.
//
// Draw X ~ C, then for every axis r draw m independent uniforms and sort them.
// X_r falls in a cell ((k_r - 1)/m, k_r/m], k_r in {1..m}, and the output is
// Y_r = the k_r-th smallest uniform on axis r. The joint CDF of Y,
// P(Y_1 < x_1, ..., Y_n < x_n), is the Bernstein copula C_m.

namespace bcop {

/// Tied auxiliary uniforms trigger a re-draw of the row at most this often.
inline constexpr int kRedrawBudget = 100;

/// Number of values strictly below x.
int count_below(std::span<const double> values, double x);

/// Ascending copy; out[k-1] is the k-th order statistic. Throws
/// std::invalid_argument if two values are equal.
std::vector<double> order_statistics(std::span<const double> values);

/// 1-based cell index k with (k-1)/m < x <= k/m; 0 maps to cell 1.
int cell_index(double x, int m);

struct AuxiliaryDraw {
  int m = 0;
  UnitPoint base;                   // X ~ C
  std::vector<double> aux;          // n x m uniforms, row r = axis r
  std::vector<double> order_stats;  // rows sorted ascending
  MultiIndex cell;                  // 1-based
  UnitPoint y;
};

/// One draw with all intermediate quantities. Throws std::logic_error if c has
/// no sampler and std::runtime_error if the re-draw budget runs out.
AuxiliaryDraw kemperman_draw_detailed(const Copula& c, int m, Rng& rng);

UnitPoint kemperman_draw(const Copula& c, int m, const RngState& state);

struct SampleBatch {
  CopulaDescriptor source;
  int m = 0;
  std::uint64_t seed = 0;
  PointSet points;
};

/// Draw i uses stream i of `seed`, so the batch does not depend on the
/// execution order or thread count.
SampleBatch sample_batch(const Copula& c, int m, std::size_t count, std::uint64_t seed);

/// Strict empirical CDF: out[p] = #{s : s_r < x_r for all r} / N.
std::vector<double> empirical_cdf(const PointSet& samples, const PointSet& at);

namespace serial {
SampleBatch sample_batch(const Copula& c, int m, std::size_t count, std::uint64_t seed);
std::vector<double> empirical_cdf(const PointSet& samples, const PointSet& at);
}  // namespace serial

struct CdfTestReport {
  PointSet test_points;
  std::vector<double> empirical;
  std::vector<double> model;
  double max_abs_dev = 0.0;
  std::size_t n_samples = 0;
};

/// Binomial 4-sigma bound at p = 1/2: 4 sqrt(0.25 / N).
double cdf_tolerance(std::size_t n_samples);

/// Compares the batch's strict empirical CDF with C_m at the test points.
/// Throws std::invalid_argument when batch and copula disagree on source or
/// degree, or the test point set is empty.
CdfTestReport cdf_agreement_test(const SampleBatch& batch, const BernsteinCopula& b,
                                 const PointSet& test_points);

/// For random x and random distinct uniform m-vectors, checks that
/// count_below(v, x) >= k exactly when the k-th order statistic is < x.
bool ordstat_count_duality_check(int m, int trials, const RngState& state);

}  // namespace bcop
