#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Runnable forms of the basis identities and moment estimates. Every sum is a
// direct O(m) loop so these can serve as oracles for the rest of the library.

namespace bcop {

struct IdentityResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// (i/m - x) b_{i,m}(x) against x(1-x)(b_{i-1,m-1}(x) - b_{i,m-1}(x)).
IdentityResidual check_prop_a(int i, int m, double x);

/// sum_{i=0}^m |x - i/m| |b_{i-1,m-1}(x) - b_{i,m-1}(x)|, equal to 1/m on (0,1).
double abs_diff_sum(int m, double x);

/// sum_i |i/m - x| b_{i,m}(x) against 2x(1-x) b_{i0,m-1}(x), i0 = floor(mx)
/// clamped to m-1.
IdentityResidual abs_moment_sum(int m, double x);

/// At x = k/m the two candidate i0 values give the same closed form:
/// |b_{k,m-1}(k/m) - b_{k-1,m-1}(k/m)|, for 1 <= k <= m-1.
double adjacent_index_gap(int m, int k);

/// sum_i |i/m - x| b_{i,m}(x).
double first_abs_moment(int m, double x);

/// sum over |x - i/m| >= delta of b_{i,m}(x).
double tail_mass(int m, double x, double delta);

struct RateRow {
  int m = 0;
  double value = 0.0;
  double scaled = 0.0;
};

/// Rows have strictly increasing m.
struct RateTable {
  std::string scaling;  // "sqrt(m)" or "m"
  std::vector<RateRow> rows;

  double max_scaled() const;
  double min_scaled() const;
};

/// (m, S(m), S(m) sqrt(m)) with S the first absolute moment.
RateTable first_abs_moment_rate(std::span<const int> degrees, double x);

/// (m, tail, m * tail).
RateTable tail_mass_rate(std::span<const int> degrees, double x, double delta);

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  int trials = 10000;
  std::uint64_t seed = 0;
  /// Name of a check whose measured quantity gets perturbed, to prove the
  /// harness reports failures. Empty for a normal run.
  std::string inject_fault;
};

struct SuiteResult {
  std::vector<CheckOutcome> checks;
  RateTable moment_rate;
  RateTable tail_rate;

  bool all_pass() const;
};

/// Names of every check run by run_identity_suite, in order.
std::vector<std::string> identity_check_names();

/// Runs every identity and rate check with the given trial counts.
SuiteResult run_identity_suite(const SuiteOptions& options);

}  // namespace bcop
