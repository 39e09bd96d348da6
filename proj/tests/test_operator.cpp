#include "bcop/operator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "bcop/quadrature.hpp"

namespace bcop {
namespace {

using P = std::vector<double>;

// Term-by-term sum over every grid node, independent of the contraction.
double brute_force(const GridCopula& g, std::span<const double> x) {
  const int n = g.dim(), m = g.degree();
  std::vector<int> idx(n);
  double sum = 0.0;
  for (std::size_t flat = 0; flat < g.values().size(); ++flat) {
    unravel(flat, m + 1, idx);
    double w = g.values()[flat];
    for (int k = 0; k < n; ++k) w *= bernstein_1d(idx[k], m, x[k]);
    sum += w;
  }
  return sum;
}

// Mixed partial by nested central differences.
double fd_mixed(const BernsteinCopula& b, P x, int axis, double h) {
  if (axis == static_cast<int>(x.size())) return b(x);
  P lo = x, hi = x;
  lo[axis] -= h;
  hi[axis] += h;
  return (fd_mixed(b, hi, axis + 1, h) - fd_mixed(b, lo, axis + 1, h)) / (2 * h);
}

TEST(BernsteinApprox, Examples) {
  const auto pi = sample_grid(make_family(Family::independence, 2), 7);
  EXPECT_NEAR(bernstein_approx(pi, P{0.3, 0.6}), 0.18, 1e-15);
  EXPECT_NEAR(brute_force(pi, P{0.3, 0.6}), 0.18, 1e-15);

  const auto mn = sample_grid(make_family(Family::min, 2), 2);
  EXPECT_DOUBLE_EQ(bernstein_approx(mn, P{0.5, 0.5}), 0.3125);
  EXPECT_DOUBLE_EQ(brute_force(mn, P{0.5, 0.5}), 0.125 + 0.0625 + 0.0625 + 0.0625);
}

TEST(BernsteinApprox, DegreeOneCollapsesToTheProduct) {
  for (const auto& c : {make_family(Family::min, 3), make_family(Family::clayton, 3, 4.0)}) {
    const auto g = sample_grid(c, 1);
    EXPECT_NEAR(bernstein_approx(g, P{0.2, 0.7, 0.9}), 0.2 * 0.7 * 0.9, 1e-15);
  }
}

TEST(BernsteinApprox, ContractionMatchesBruteForce) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u;
  for (int n : {2, 3, 4}) {
    const auto g = sample_grid(make_family(Family::clayton, n, 1.3), 5);
    for (int t = 0; t < 20; ++t) {
      P x(n);
      for (double& v : x) v = u(rng);
      EXPECT_NEAR(bernstein_approx(g, x), brute_force(g, x), 1e-14);
    }
  }
}

TEST(BernsteinCopula, ReproducesIndependence) {
  const auto b = make_bernstein_copula(make_family(Family::independence, 2), 5);
  const auto lattice = unit_lattice(2, 10);
  for (std::size_t i = 0; i < lattice.size(); ++i)
    EXPECT_NEAR(b(lattice[i]), lattice[i][0] * lattice[i][1], 1e-12);
}

TEST(BernsteinCopula, MinAtDegreeTwo) {
  const auto b = make_bernstein_copula(make_family(Family::min, 2), 2);
  EXPECT_TRUE(b.validity().is_copula_within(1e-12));
  EXPECT_EQ(b.deltas().at(std::vector<int>{0, 0}), 0.5);
  EXPECT_EQ(b.deltas().at(std::vector<int>{1, 1}), 0.5);
}

TEST(BernsteinCopula, InvalidAnalyticGridThrows) {
  std::vector<double> v = sample_grid(make_family(Family::independence, 2), 2).values();
  v[4] = 0.51;
  EXPECT_THROW(make_bernstein_copula(GridCopula(2, 2, v, {"independence", 0.0, 2})),
               ValidityError);
}

TEST(BernsteinCopula, EmpiricalGridIsReportedNotAsserted) {
  PointSet rows(2);
  for (double r : {0.3, 0.1, 0.7, 0.5}) rows.push_back(P{r, 1.0 - r});
  const auto b = make_bernstein_copula(empirical_copula_from_data(rows, 3));
  EXPECT_EQ(b.grid().kind(), GridSource::empirical);
  EXPECT_NEAR(b.validity().mass_total, 1.0, 1e-15);
}

TEST(BernsteinCopula, CopiesShareState) {
  const auto a = make_bernstein_copula(make_family(Family::min, 2), 4);
  const auto b = a;
  EXPECT_EQ(&a.grid(), &b.grid());
}

TEST(Density, Examples) {
  for (int m : {1, 3, 9}) {
    const auto b = make_bernstein_copula(make_family(Family::independence, 2), m);
    EXPECT_NEAR(density(b, P{0.4, 0.9}), 1.0, 1e-12);
  }
  const auto mn = make_bernstein_copula(make_family(Family::min, 2), 2);
  EXPECT_DOUBLE_EQ(density(mn, P{0.5, 0.5}), 1.0);
  EXPECT_EQ(density(mn, P{0.0, 1.0}), 0.0);
}

TEST(Density, IntegratesToOneAndIsNonnegative) {
  for (const auto& c : {make_family(Family::clayton, 2, 2.0), make_family(Family::fgm, 3, -1.0),
                        make_family(Family::min, 3)}) {
    const auto b = make_bernstein_copula(c, 6);
    EXPECT_NEAR(integrate_density(b, 6), 1.0, 1e-12) << c.descriptor().label();
    const auto pts = unit_lattice(c.dim(), 8);
    for (double d : density_points(b, pts)) EXPECT_GE(d, -1e-12);
  }
}

TEST(Density, MatchesNestedFiniteDifferences) {
  const auto b = make_bernstein_copula(make_family(Family::clayton, 2, 2.0), 10);
  const auto pts = interior_lattice(2, 5);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const P x(pts[i].begin(), pts[i].end());
    EXPECT_NEAR(b.density(x), fd_mixed(b, x, 0, 1e-4), 1e-4);
  }
}

TEST(Density, IntegralOverBoxIsTheCVolume) {
  const auto c = make_family(Family::fgm, 2, 0.8);
  const auto b = make_bernstein_copula(c, 7);
  const Box box{P{0.1, 0.35}, P{0.6, 0.9}};
  const double q = integrate_box([&](std::span<const double> x) { return b.density(x); },
                                 box.lower, box.upper, 8);
  EXPECT_NEAR(q, c_volume(b.as_copula(), box), 1e-13);
}

TEST(Quadrature, GaussLegendreIsExactToDegreeTwoNMinusOne) {
  for (int order : {1, 2, 5, 12}) {
    const auto rule = gauss_legendre(order);
    for (int p = 0; p < 2 * order; ++p) {
      double q = 0.0;
      for (int k = 0; k < order; ++k) q += rule.weights[k] * std::pow(rule.nodes[k], p);
      EXPECT_NEAR(q, 1.0 / (p + 1), 1e-14) << order << " " << p;
    }
  }
  const auto shifted = gauss_legendre(3, -1.0, 2.0);
  double q = 0.0;
  for (int k = 0; k < 3; ++k) q += shifted.weights[k] * shifted.nodes[k] * shifted.nodes[k];
  EXPECT_NEAR(q, 3.0, 1e-14);
}

TEST(EmpiricalSmoothing, IndependentDataApproachIndependence) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u;
  PointSet rows(2);
  for (int i = 0; i < 1000; ++i) rows.push_back(P{u(rng), u(rng)});
  const auto b = make_bernstein_copula(empirical_copula_from_data(rows, 6));
  const auto lattice = unit_lattice(2, 10);
  for (std::size_t i = 0; i < lattice.size(); ++i)
    EXPECT_NEAR(b(lattice[i]), lattice[i][0] * lattice[i][1], 0.06);
}

TEST(Partial, Examples) {
  const auto pi = make_bernstein_copula(make_family(Family::independence, 2), 6);
  EXPECT_NEAR(partial_derivative(pi, 0, P{0.3, 0.6}), 0.6, 1e-13);
  const auto cl = make_bernstein_copula(make_family(Family::clayton, 3, 1.0), 5);
  for (double t : {0.0, 0.2, 0.77, 1.0}) {
    EXPECT_NEAR(cl.partial(0, P{t, 1, 1}), 1.0, 1e-12);
    EXPECT_NEAR(cl.partial(2, P{1, 1, t}), 1.0, 1e-12);
  }
}

TEST(Partial, MatchesCentralDifferences) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (const auto& c : {make_family(Family::min, 2), make_family(Family::w2, 2),
                        make_family(Family::clayton, 3, 2.0)}) {
    const auto b = make_bernstein_copula(c, 12);
    for (int t = 0; t < 10; ++t) {
      P x(c.dim());
      for (double& v : x) v = u(rng);
      for (int k = 0; k < c.dim(); ++k) {
        P lo = x, hi = x;
        lo[k] -= 1e-6;
        hi[k] += 1e-6;
        EXPECT_NEAR(b.partial(k, x), (b(hi) - b(lo)) / 2e-6, 1e-5);
      }
    }
  }
}

TEST(Partial, BadAxisThrows) {
  const auto b = make_bernstein_copula(make_family(Family::min, 2), 3);
  EXPECT_THROW(b.partial(2, P{0.5, 0.5}), std::out_of_range);
}

TEST(Preservation, ResampledMassesStayNonnegative) {
  // C_m is itself a copula, so sampling it on a fresh grid gives valid masses.
  for (const auto& c : {make_family(Family::w2, 2), make_family(Family::fgm, 3, 1.0)}) {
    const auto b = make_bernstein_copula(c, 5);
    const auto r = validate_copula(sample_grid(b.as_copula(), 8), 1e-12);
    EXPECT_TRUE(r.is_copula_within(1e-12)) << c.descriptor().label();
  }
}

TEST(Preservation, MarginsAreMonotone) {
  const auto b = make_bernstein_copula(make_family(Family::clayton, 2, 5.0), 9);
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = b(P{i / 100.0, 0.4});
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Kernels, SerialAndParallelAgree) {
  const auto b = make_bernstein_copula(make_family(Family::clayton, 3, 2.0), 7);
  const auto pts = unit_lattice(3, 9);
  EXPECT_EQ(evaluate_points(b, pts), serial::evaluate_points(b, pts));
  EXPECT_EQ(density_points(b, pts), serial::density_points(b, pts));
  const auto c = make_family(Family::fgm, 3, 0.5);
  EXPECT_EQ(evaluate_points(c, pts), serial::evaluate_points(c, pts));
}

TEST(SupErrorStudy, Examples) {
  const auto pi = make_family(Family::independence, 2);
  for (const auto& row : sup_error_study(pi, std::vector<int>{2, 4, 8}, 10))
    EXPECT_LE(row.sup_error, 1e-12);

  const auto rows = sup_error_study(make_family(Family::min, 2), std::vector<int>{4, 16, 64}, 20);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_GT(rows[0].sup_error, rows[1].sup_error);
  EXPECT_GT(rows[1].sup_error, rows[2].sup_error);

  const auto small = sup_error_study(make_family(Family::min, 2), std::vector<int>{2}, 2);
  EXPECT_GE(small[0].sup_error, 0.1875 - 1e-15);
  EXPECT_EQ(small[0].argmax_point, (P{0.5, 0.5}));
}

TEST(SupErrorStudy, RejectsCoarseLattice) {
  EXPECT_THROW(sup_error_study(make_family(Family::min, 2), std::vector<int>{2}, 1),
               std::invalid_argument);
}

TEST(DerivativeErrorStudy, IndependenceIsExact) {
  PointSet pts(2);
  pts.push_back(P{0.5, 0.5});
  pts.push_back(P{0.13, 0.88});
  for (const auto& row : derivative_error_study(make_family(Family::independence, 2),
                                                std::vector<int>{3, 10, 40}, 0, pts))
    EXPECT_LE(row.error, 1e-12);
}

TEST(DerivativeErrorStudy, OffCentreFgmErrorShrinks) {
  PointSet pts(2);
  pts.push_back(P{0.3, 0.6});
  const auto rows = derivative_error_study(make_family(Family::fgm, 2, 1.0),
                                           std::vector<int>{10, 40, 160}, 0, pts);
  EXPECT_GT(rows[0].error, rows[1].error);
  EXPECT_GT(rows[1].error, rows[2].error);
}

TEST(DerivativeErrorStudy, Errors) {
  PointSet edge(2);
  edge.push_back(P{0.0, 0.5});
  EXPECT_THROW(derivative_error_study(make_family(Family::min, 2), std::vector<int>{4}, 0, edge),
               std::invalid_argument);
  PointSet ok(2);
  ok.push_back(P{0.3, 0.5});
  const auto bare = make_bernstein_copula(make_family(Family::min, 2), 3);
  Copula no_partials(bare.as_copula().descriptor(),
                     [&](std::span<const double> x) { return bare(x); });
  EXPECT_THROW(derivative_error_study(no_partials, std::vector<int>{4}, 0, ok), std::logic_error);
}

}  // namespace
}  // namespace bcop
