// Acceptance table. `acceptance` runs every criterion; `acceptance N` runs one.
// Prints one [PASS]/[FAIL] line per criterion and exits nonzero on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bcop/basis.hpp"
#include "bcop/copula.hpp"
#include "bcop/grid.hpp"
#include "bcop/identities.hpp"
#include "bcop/kemperman.hpp"
#include "bcop/operator.hpp"
#include "bcop/quadrature.hpp"

namespace fs = std::filesystem;
using namespace bcop;

namespace {

struct Outcome {
  bool pass = true;
  std::string first_failure;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<void(Outcome&)> body;
};

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

std::vector<Copula> families(int n) {
  std::vector<Copula> out{make_family(Family::independence, n), make_family(Family::min, n),
                          make_family(Family::fgm, n, 1.0), make_family(Family::clayton, n, 2.0)};
  if (n == 2) out.insert(out.begin() + 2, make_family(Family::w2, 2));
  return out;
}

// Partition of unity: every term of the tensor sum is formed and added.
void partition_of_unity(Outcome& o) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u;
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 100; ++m) {
      for (int s = 0; s < 100; ++s) {
        std::vector<std::vector<double>> rows(n, std::vector<double>(m + 1));
        for (int k = 0; k < n; ++k) {
          const double t = u(rng);
          for (int i = 0; i <= m; ++i) rows[k][i] = bernstein_1d(i, m, t);
        }
        double sum = 0.0;
        if (n == 1) {
          for (double a : rows[0]) sum += a;
        } else if (n == 2) {
          for (double a : rows[0])
            for (double b : rows[1]) sum += a * b;
        } else {
          for (double a : rows[0])
            for (double b : rows[1]) {
              const double ab = a * b;
              for (double c : rows[2]) sum += ab * c;
            }
        }
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
  }
  o.require(worst <= 1e-12, "max |sum - 1| = " + sci(worst));
  o.detail << "max |sum - 1| = " << sci(worst) << " over n<=3, m<=100, 100 x each";
}

// Integral identity: tensor Gauss-Legendre quadrature of every basis function.
void integral_identity(Outcome& o) {
  double worst = 0.0;
  for (int m = 1; m <= 20; ++m) {
    const auto rule = gauss_legendre(m + 1);
    const int q = m + 1;
    // table[i][k] = w_k b_{i,m}(node_k)
    std::vector<std::vector<double>> table(m + 1, std::vector<double>(q));
    for (int i = 0; i <= m; ++i)
      for (int k = 0; k < q; ++k) table[i][k] = rule.weights[k] * bernstein_1d(i, m, rule.nodes[k]);
    for (int n = 1; n <= 3; ++n) {
      const double target = 1.0 / std::pow(m + 1.0, n);
      const std::size_t count = ipow(m + 1, n);
      std::vector<int> idx(n);
      for (std::size_t flat = 0; flat < count; ++flat) {
        unravel(flat, m + 1, idx);
        std::vector<int> node(n);
        double integral = 0.0;
        for (std::size_t nf = 0; nf < ipow(q, n); ++nf) {
          unravel(nf, q, node);
          double w = 1.0;
          for (int k = 0; k < n; ++k) w *= table[idx[k]][node[k]];
          integral += w;
        }
        worst = std::max(worst, std::abs(integral - target));
      }
    }
  }
  // Spot check through the generic box integrator.
  const std::vector<int> i{3, 0, 7};
  const double via_box = integrate_box(
      [&](std::span<const double> x) { return bernstein_nd(i, 9, x); }, std::vector<double>(3, 0.0),
      std::vector<double>(3, 1.0), 10);
  worst = std::max(worst, std::abs(via_box - basis_integral_value(3, 9)));
  o.require(worst <= 1e-10, "max error " + sci(worst));
  o.detail << "max |quad - 1/(m+1)^n| = " << sci(worst) << " over all i, n<=3, m<=20";
}

// C_m resampled on a fresh grid must still satisfy the copula conditions.
void copula_preservation(Outcome& o) {
  double worst_boundary = 0.0, worst_mass = 0.0;
  int cases = 0;
  for (int n : {2, 3}) {
    const int resample = n == 2 ? 16 : 8;
    for (const auto& c : families(n)) {
      for (int m = 1; m <= 12; ++m) {
        const auto b = make_bernstein_copula(c, m);
        const auto g = sample_grid(b.as_copula(), resample);
        const auto r = validate_copula(g, 1e-10);
        worst_boundary = std::max(worst_boundary, r.max_boundary_violation);
        worst_mass = std::min(worst_mass, r.min_cell_mass);
        o.require(r.max_boundary_violation <= 1e-10,
                  c.descriptor().label() + " m=" + std::to_string(m) + " boundary");
        o.require(r.min_cell_mass >= -1e-12,
                  c.descriptor().label() + " m=" + std::to_string(m) + " mass");
        ++cases;
      }
    }
  }
  o.detail << cases << " cases; max boundary violation " << sci(worst_boundary)
           << ", min resampled mass " << sci(worst_mass);
}

void exact_identities(Outcome& o) {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> pick_m(1, 200);
  std::uniform_real_distribution<double> u;
  double worst_diff = 0.0, worst_moment = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const int m = pick_m(rng);
    double x = u(rng);
    while (x == 0.0) x = u(rng);
    worst_diff = std::max(worst_diff, std::abs(abs_diff_sum(m, x) - 1.0 / m));
  }
  for (int t = 0; t < 10000; ++t) {
    const int m = pick_m(rng);
    worst_moment = std::max(worst_moment, abs_moment_sum(m, u(rng)).residual);
  }
  o.require(worst_diff <= 1e-12, "abs_diff_sum " + sci(worst_diff));
  o.require(worst_moment <= 1e-12, "abs_moment_sum " + sci(worst_moment));
  o.detail << "abs_diff_sum max error " << sci(worst_diff) << ", abs_moment_sum max residual "
           << sci(worst_moment);
}

void prop_a_exhaustive(Outcome& o) {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u;
  double worst = 0.0;
  long checked = 0;
  for (int m = 1; m <= 64; ++m) {
    std::vector<double> xs{0.0, 1.0, 0.5};
    for (int s = 0; s < 100; ++s) xs.push_back(u(rng));
    for (int i = 0; i <= m; ++i)
      for (double x : xs) {
        worst = std::max(worst, check_prop_a(i, m, x).residual);
        ++checked;
      }
  }
  o.require(worst <= 1e-13, "residual " + sci(worst));
  o.detail << "max residual " << sci(worst) << " over " << checked << " (i, m, x) triples";
}

void rate_checks(Outcome& o) {
  std::vector<int> ladder;
  for (int m = 4; m <= 4096; m *= 2) ladder.push_back(m);
  double worst_excess = -1.0;
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto t = first_abs_moment_rate(ladder, x);
    for (const auto& row : t.rows) {
      const double excess = row.scaled - std::sqrt(x * (1 - x));
      worst_excess = std::max(worst_excess, excess);
      o.require(excess <= 1e-12, "moment ceiling m=" + std::to_string(row.m));
    }
  }
  const auto tail = tail_mass_rate(std::vector<int>{64, 256, 1024}, 0.5, 0.1);
  for (std::size_t k = 0; k < tail.rows.size(); ++k) {
    const auto& row = tail.rows[k];
    o.require(row.value <= 0.25 / (row.m * 0.01), "tail ceiling m=" + std::to_string(row.m));
    if (k > 0) o.require(row.scaled < tail.rows[k - 1].scaled, "m*tail not strictly decreasing");
  }
  o.detail << "max S(m)sqrt(m) - sqrt(x(1-x)) = " << sci(worst_excess) << "; m*tail = ";
  for (const auto& row : tail.rows) o.detail << sci(row.scaled) << " ";
}

void uniform_convergence(Outcome& o) {
  const std::vector<int> degrees{4, 16, 64, 256};
  const auto rows = sup_error_study(make_family(Family::min, 2), degrees, 50);
  o.detail << "min sup errors:";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    o.detail << ' ' << sci(rows[k].sup_error);
    if (k > 0) o.require(rows[k].sup_error < rows[k - 1].sup_error, "not strictly decreasing");
  }
  double worst_pi = 0.0;
  for (const auto& r : sup_error_study(make_family(Family::independence, 2), degrees, 50))
    worst_pi = std::max(worst_pi, r.sup_error);
  o.require(worst_pi <= 1e-12, "independence not reproduced: " + sci(worst_pi));
  o.detail << "; independence max " << sci(worst_pi);
}

void derivative_convergence(Outcome& o) {
  const std::vector<int> degrees{10, 40, 160};
  PointSet centre(2);
  centre.push_back(std::vector<double>{0.5, 0.5});
  const auto rows = derivative_error_study(make_family(Family::fgm, 2, 1.0), degrees, 0, centre);
  o.detail << "fgm(1) errors at (0.5,0.5):";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    o.detail << ' ' << sci(rows[k].error);
    if (k > 0) o.require(rows[k].error < rows[k - 1].error, "fgm(1) error not strictly decreasing");
  }
  double worst_pi = 0.0;
  for (const auto& r : derivative_error_study(make_family(Family::independence, 2), degrees, 0, centre))
    worst_pi = std::max(worst_pi, r.error);
  o.require(worst_pi <= 1e-12, "independence derivative not exact");
  o.detail << "; independence max " << sci(worst_pi);
}

double fd_mixed(const BernsteinCopula& b, std::vector<double> x, int axis, double h) {
  if (axis == static_cast<int>(x.size())) return b(x);
  auto lo = x, hi = x;
  lo[axis] -= h;
  hi[axis] += h;
  return (fd_mixed(b, hi, axis + 1, h) - fd_mixed(b, lo, axis + 1, h)) / (2 * h);
}

void density_coherence(Outcome& o) {
  double min_density = 0.0, worst_total = 0.0, worst_fd = 0.0;
  const auto lattice = unit_lattice(2, 20);
  const auto interior = interior_lattice(2, 5);
  for (const auto& c : families(2)) {
    for (int m = 1; m <= 12; ++m) {
      const auto b = make_bernstein_copula(c, m);
      for (double d : density_points(b, lattice)) min_density = std::min(min_density, d);
      worst_total = std::max(worst_total, std::abs(integrate_density(b, m) - 1.0));
      for (std::size_t i = 0; i < interior.size(); ++i) {
        const std::vector<double> x(interior[i].begin(), interior[i].end());
        worst_fd = std::max(worst_fd, std::abs(b.density(x) - fd_mixed(b, x, 0, 1e-5)));
      }
    }
  }
  o.require(min_density >= -1e-12, "negative density " + sci(min_density));
  o.require(worst_total <= 1e-8, "total " + sci(worst_total));
  o.require(worst_fd <= 1e-4, "finite differences " + sci(worst_fd));
  o.detail << "min density " << sci(min_density) << ", max |total - 1| " << sci(worst_total)
           << ", max |density - FD| " << sci(worst_fd);
}

void sampler_agreement(Outcome& o) {
  const std::size_t N = 100000;
  const double tol = cdf_tolerance(N);
  const auto points = interior_lattice(2, 5);
  double worst = 0.0;
  std::uint64_t seed = 1000;
  for (const auto& c : families(2)) {
    for (int m : {1, 2, 4, 8}) {
      const auto batch = sample_batch(c, m, N, seed++);
      const auto rep = cdf_agreement_test(batch, make_bernstein_copula(c, m), points);
      worst = std::max(worst, rep.max_abs_dev);
      o.require(rep.max_abs_dev <= tol,
                c.descriptor().label() + " m=" + std::to_string(m) + " dev " + sci(rep.max_abs_dev));
    }
  }
  o.detail << "max deviation " << sci(worst) << " (tolerance " << sci(tol) << ")";
}

void duality(Outcome& o) {
  for (int m = 1; m <= 32; ++m)
    o.require(ordstat_count_duality_check(m, 10000, {77, static_cast<std::uint64_t>(m)}),
              "m=" + std::to_string(m));
  o.detail << "10000 trials for each m in 1..32";
}

int run_cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string(BCOPULA_EXE) + " " + args + " --out " + dir.string() +
                          " > " + (dir / "log.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void reproducibility(Outcome& o) {
  const fs::path dir = fs::temp_directory_path() / "bcopula_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string args = "sample --family clayton --theta 2 --m 8 --count 100000 --seed 7";
  const int a = run_cli(args + " --name first", dir);
  const int b = run_cli(args + " --name second", dir);
  o.require(a == 0 && b == 0, "sample exit codes " + std::to_string(a) + "," + std::to_string(b));
  const auto first = slurp(dir / "first.csv");
  o.require(!first.empty() && first == slurp(dir / "second.csv"), "sample CSVs differ");
  const int v = run_cli("verify", dir);
  o.require(v == 0, "verify exit code " + std::to_string(v));
  o.detail << "sample CSV " << first.size() << " bytes identical across runs; verify exit " << v;
  fs::remove_all(dir);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> table{
      {1, "partition_of_unity", 10, partition_of_unity},
      {2, "integral_identity", 30, integral_identity},
      {3, "copula_preservation", 120, copula_preservation},
      {4, "exact_identities", 10, exact_identities},
      {5, "prop_a_exhaustive", 10, prop_a_exhaustive},
      {6, "rate_checks", 30, rate_checks},
      {7, "uniform_convergence", 60, uniform_convergence},
      {8, "derivative_convergence", 30, derivative_convergence},
      {9, "density_coherence", 60, density_coherence},
      {10, "sampler_agreement", 180, sampler_agreement},
      {11, "ordstat_count_duality", 5, duality},
      {12, "reproducibility", 60, reproducibility},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (only < 0 || only > static_cast<int>(table.size())) {
    std::cerr << "usage: acceptance [criterion 1.." << table.size() << "]\n";
    return 2;
  }

  bool all = true;
  for (const auto& c : table) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= c.budget_s, "runtime over budget");
    all = all && o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.name << " (" << std::fixed
              << std::setprecision(2) << secs << " s / " << std::setprecision(0) << c.budget_s
              << " s): " << o.detail.str();
    if (!o.pass) std::cout << " | first failure: " << o.first_failure;
    std::cout << std::endl;
    std::cout.unsetf(std::ios::fixed);
  }
  return all ? 0 : 1;
}
