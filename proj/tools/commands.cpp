#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "bcop/copula.hpp"
#include "bcop/grid.hpp"
#include "bcop/identities.hpp"
#include "bcop/io.hpp"
#include "bcop/kemperman.hpp"
#include "bcop/operator.hpp"

namespace bcop::cli {

namespace {

using nlohmann::json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sequences that must shrink; values already at the roundoff floor count as
// converged.
constexpr double kRoundoffFloor = 1e-12;

class Manifest {
 public:
  explicit Manifest(const RunConfig& cfg) : cfg_(cfg), start_(std::chrono::steady_clock::now()) {}

  void check(const std::string& name, bool pass, const std::string& detail) {
    checks_.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    all_pass_ = all_pass_ && pass;
  }
  void set(const std::string& key, json value) { extra_[key] = std::move(value); }
  bool all_pass() const { return all_pass_; }

  void write() const {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    json doc = {{"config", cfg_.to_json()},
                {"version", BCOP_VERSION},
                {"checks", checks_},
                {"elapsed_ms", std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - start_)
                                   .count()},
                {"timestamp", ts.str()}};
    for (const auto& [k, v] : extra_.items()) doc[k] = v;
    write_file_atomic(cfg_.out_dir / (cfg_.basename() + ".manifest.json"), doc.dump(2) + "\n");
  }

  int exit_code() const { return all_pass_ ? kExitOk : kExitCheckFailed; }

 private:
  const RunConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  json checks_ = json::array();
  json extra_ = json::object();
  bool all_pass_ = true;
};

std::string fmt(double v) { return format_double(v); }

std::string detail_of(double worst, const char* op, double bound) {
  std::ostringstream os;
  os.precision(6);
  os << "worst=" << worst << ' ' << op << ' ' << bound;
  return os.str();
}

json validity_json(const ValidityReport& r) {
  return {{"max_boundary_violation", r.max_boundary_violation},
          {"min_cell_mass", r.min_cell_mass},
          {"mass_total", r.mass_total},
          {"is_copula_within_1e-10", r.is_copula_within(kValidityTolerance)}};
}

void write_out(const RunConfig& cfg, const std::string& suffix, const std::string& text) {
  write_file_atomic(cfg.out_dir / (cfg.basename() + suffix), text);
}

std::string coord_header(int n) {
  std::string h;
  for (int k = 1; k <= n; ++k) h += "x" + std::to_string(k) + ",";
  return h;
}

void write_coords(std::ostream& os, std::span<const double> x) {
  for (double v : x) os << fmt(v) << ',';
}

void require_single_source(const RunConfig& cfg) {
  if (cfg.family.empty() == cfg.data_path.empty())
    throw ConfigError("exactly one of --family or --data is required");
}

void require_family(const RunConfig& cfg) {
  if (cfg.family.empty() || !cfg.data_path.empty())
    throw ConfigError(cfg.subcommand + " needs --family (data sources are not supported)");
}

Copula family_copula(const RunConfig& cfg) {
  return make_family(parse_family(cfg.family), cfg.n, cfg.theta);
}

PointSet load_data(const RunConfig& cfg) { return read_csv_points(cfg.data_path, cfg.header); }

// The reference copula and its Bernstein approximation for a config source.
struct Source {
  Copula reference;
  BernsteinCopula bernstein;
};

Source resolve_source(const RunConfig& cfg) {
  require_single_source(cfg);
  if (!cfg.family.empty()) {
    Copula c = family_copula(cfg);
    BernsteinCopula b = make_bernstein_copula(c, cfg.m);
    return {std::move(c), std::move(b)};
  }
  const PointSet rows = load_data(cfg);
  return {empirical_copula(rows), make_bernstein_copula(empirical_copula_from_data(rows, cfg.m))};
}

void record_validity(Manifest& manifest, const BernsteinCopula& b) {
  manifest.set("validity", validity_json(b.validity()));
  if (b.grid().kind() == GridSource::analytic) {
    const auto& r = b.validity();
    manifest.check("validity", r.is_copula_within(kValidityTolerance),
                   "boundary=" + fmt(r.max_boundary_violation) +
                       " min_mass=" + fmt(r.min_cell_mass) + " total=" + fmt(r.mass_total));
  }
}

}  // namespace

int RunConfig::resolved_grid() const {
  if (grid > 0) return grid;
  if (n <= 2) return 50;
  if (n == 3) return 20;
  return 8;
}

nlohmann::json RunConfig::to_json() const {
  json j = {{"subcommand", subcommand}, {"n", n},       {"m", m},         {"grid", resolved_grid()},
            {"seed", seed},             {"out_dir", out_dir.string()}, {"name", basename()}};
  if (!family.empty()) {
    j["family"] = family;
    j["theta"] = theta;
  }
  if (!data_path.empty()) {
    j["data"] = data_path;
    j["header"] = header;
  }
  if (subcommand == "sample") {
    j["count"] = count;
    j["check"] = check;
    j["check_grid"] = check_grid;
  }
  if (subcommand == "converge") {
    j["degrees"] = degrees;
    j["axis"] = axis;
    j["at"] = at;
  }
  if (subcommand == "density") j["quad_order"] = quad_order > 0 ? quad_order : m + 1;
  if (subcommand == "verify") {
    j["trials"] = trials;
    if (!inject_fault.empty()) j["inject_fault"] = inject_fault;
  }
  return j;
}

int cmd_approximate(const RunConfig& cfg) {
  Manifest manifest(cfg);
  const Source src = resolve_source(cfg);
  const int n = src.bernstein.dim();
  const PointSet lattice = unit_lattice(n, cfg.resolved_grid());
  const auto exact = evaluate_points(src.reference, lattice);
  const auto approx = evaluate_points(src.bernstein, lattice);

  std::ostringstream csv;
  csv << coord_header(n) << "C,Cm,abs_error\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const double err = std::abs(approx[i] - exact[i]);
    worst = std::max(worst, err);
    write_coords(csv, lattice[i]);
    csv << fmt(exact[i]) << ',' << fmt(approx[i]) << ',' << fmt(err) << '\n';
  }
  write_out(cfg, ".csv", csv.str());

  record_validity(manifest, src.bernstein);
  manifest.set("sup_error", worst);
  manifest.write();
  return manifest.exit_code();
}

int cmd_density(const RunConfig& cfg) {
  Manifest manifest(cfg);
  const Source src = resolve_source(cfg);
  const BernsteinCopula& b = src.bernstein;
  const PointSet lattice = unit_lattice(b.dim(), cfg.resolved_grid());
  const auto dens = density_points(b, lattice);

  std::ostringstream csv;
  csv << coord_header(b.dim()) << "density\n";
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    write_coords(csv, lattice[i]);
    csv << fmt(dens[i]) << '\n';
  }
  write_out(cfg, ".csv", csv.str());

  const int order = cfg.quad_order > 0 ? cfg.quad_order : cfg.m + 1;
  const double total = integrate_density(b, order);
  const double min_density = *std::min_element(dens.begin(), dens.end());
  manifest.set("quadrature_total", total);
  manifest.set("min_density", min_density);
  record_validity(manifest, b);
  if (b.grid().kind() == GridSource::analytic) {
    manifest.check("density_nonnegative", min_density >= -1e-12,
                   detail_of(min_density, ">=", -1e-12));
    manifest.check("density_total", std::abs(total - 1.0) <= 1e-8,
                   detail_of(std::abs(total - 1.0), "<=", 1e-8));
  }
  manifest.write();
  return manifest.exit_code();
}

int cmd_sample(const RunConfig& cfg) {
  require_family(cfg);
  if (cfg.count < 1) throw ConfigError("--count must be >= 1");
  Manifest manifest(cfg);
  const Copula c = family_copula(cfg);
  const SampleBatch batch = sample_batch(c, cfg.m, cfg.count, cfg.seed);

  std::ostringstream csv;
  write_sample_csv(csv, batch);
  write_out(cfg, ".csv", csv.str());
  write_out(cfg, ".json", sample_sidecar(batch).dump(2) + "\n");

  if (cfg.check) {
    const BernsteinCopula b = make_bernstein_copula(c, cfg.m);
    const PointSet points = interior_lattice(c.dim(), cfg.check_grid);
    const CdfTestReport report = cdf_agreement_test(batch, b, points);
    const double tol = cdf_tolerance(report.n_samples) + 1e-6;

    std::ostringstream rep;
    rep << coord_header(c.dim()) << "empirical,model,abs_dev\n";
    for (std::size_t p = 0; p < points.size(); ++p) {
      write_coords(rep, points[p]);
      rep << fmt(report.empirical[p]) << ',' << fmt(report.model[p]) << ','
          << fmt(std::abs(report.empirical[p] - report.model[p])) << '\n';
    }
    write_out(cfg, "_check.csv", rep.str());
    manifest.set("max_abs_dev", report.max_abs_dev);
    manifest.check("cdf_agreement", report.max_abs_dev <= tol,
                   detail_of(report.max_abs_dev, "<=", tol));
    std::cout << "cdf_agreement max_abs_dev=" << report.max_abs_dev << " tol=" << tol << '\n';
  }
  manifest.write();
  return manifest.exit_code();
}

namespace {

// True where dC/dx_axis does not exist: min when x_axis ties the smallest
// other coordinate, w2 on the line x_1 + x_2 = 1.
bool on_kink(const CopulaDescriptor& d, std::span<const double> x, int axis) {
  if (d.family == "min") {
    double others = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (static_cast<int>(k) != axis) others = std::min(others, x[k]);
    return x[axis] == others;
  }
  if (d.family == "w2") return x[0] + x[1] == 1.0;
  return false;
}

}  // namespace

int cmd_converge(const RunConfig& cfg) {
  require_family(cfg);
  if (cfg.degrees.empty()) throw ConfigError("--degrees must not be empty");
  Manifest manifest(cfg);
  const Copula c = family_copula(cfg);
  const int n = c.dim();

  const auto rows = sup_error_study(c, cfg.degrees, cfg.resolved_grid());
  std::ostringstream csv;
  csv << "m,sup_error,";
  for (int k = 1; k <= n; ++k) csv << "argmax_x" << k << ',';
  csv << "elapsed_ms\n";
  for (const auto& r : rows) {
    csv << r.m << ',' << fmt(r.sup_error) << ',';
    write_coords(csv, r.argmax_point);
    csv << fmt(r.elapsed_ms) << '\n';
  }
  write_out(cfg, ".csv", csv.str());

  auto converging = [](const std::vector<double>& seq, double& worst_step) {
    bool ok = true;
    worst_step = -1e300;
    for (std::size_t k = 1; k < seq.size(); ++k) {
      worst_step = std::max(worst_step, seq[k] - seq[k - 1]);
      const bool floor = seq[k] <= kRoundoffFloor && seq[k - 1] <= kRoundoffFloor;
      ok = ok && (seq[k] < seq[k - 1] || floor);
    }
    return ok;
  };

  std::vector<double> sups;
  for (const auto& r : rows) sups.push_back(r.sup_error);
  double step = 0.0;
  bool ok = converging(sups, step);
  manifest.check("sup_error_converging", ok,
                 "largest step " + fmt(step) + " (strict decrease, or both <= 1e-12)");

  if (c.has_partials()) {
    PointSet points(n);
    if (cfg.at.empty()) {
      points.push_back(std::vector<double>(n, 0.5));
    } else {
      for (const auto& p : cfg.at) {
        if (static_cast<int>(p.size()) != n)
          throw ConfigError("--at point has " + std::to_string(p.size()) + " coordinates");
        points.push_back(p);
      }
    }
    const auto drows = derivative_error_study(c, cfg.degrees, cfg.axis - 1, points);
    std::ostringstream dcsv;
    dcsv << "m," << coord_header(n) << "axis,approx,exact,error\n";
    for (const auto& r : drows) {
      dcsv << r.m << ',';
      write_coords(dcsv, r.point);
      dcsv << (r.axis + 1) << ',' << fmt(r.approx) << ',' << fmt(r.exact) << ','
           << fmt(r.error) << '\n';
    }
    write_out(cfg, "_derivative.csv", dcsv.str());

    json excluded = json::array();
    for (std::size_t p = 0; p < points.size(); ++p) {
      // No convergence is expected where C itself has a kink.
      if (on_kink(c.descriptor(), points[p], cfg.axis - 1)) {
        excluded.push_back(p);
        continue;
      }
      std::vector<double> errs;
      for (std::size_t r = p; r < drows.size(); r += points.size()) errs.push_back(drows[r].error);
      ok = converging(errs, step);
      manifest.check("derivative_error_converging[" + std::to_string(p) + "]", ok,
                     "largest step " + fmt(step) + " (strict decrease, or both <= 1e-12)");
    }
    manifest.set("derivative_points_excluded", excluded);
  }
  manifest.write();
  return manifest.exit_code();
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.trials < 1) throw ConfigError("--trials must be >= 1");
  if (!cfg.inject_fault.empty()) {
    const auto names = identity_check_names();
    if (std::find(names.begin(), names.end(), cfg.inject_fault) == names.end())
      throw ConfigError("--inject-fault: unknown check '" + cfg.inject_fault + "'");
  }
  Manifest manifest(cfg);
  const SuiteResult suite = run_identity_suite({cfg.trials, cfg.seed, cfg.inject_fault});

  auto rate_csv = [](const RateTable& t) {
    std::ostringstream os;
    os << "m,value,scaled\n";
    for (const auto& r : t.rows) os << r.m << ',' << fmt(r.value) << ',' << fmt(r.scaled) << '\n';
    return os.str();
  };
  write_out(cfg, "_moment_rate.csv", rate_csv(suite.moment_rate));
  write_out(cfg, "_tail_rate.csv", rate_csv(suite.tail_rate));

  for (const auto& c : suite.checks) {
    manifest.check(c.name, c.pass, c.detail);
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
  }
  manifest.write();
  return manifest.exit_code();
}

int cmd_fit(const RunConfig& cfg) {
  if (cfg.data_path.empty() || !cfg.family.empty()) throw ConfigError("fit needs --data only");
  Manifest manifest(cfg);
  const PointSet rows = load_data(cfg);
  const BernsteinCopula b = make_bernstein_copula(empirical_copula_from_data(rows, cfg.m));
  const int n = b.dim();
  const PointSet lattice = unit_lattice(n, cfg.resolved_grid());
  const auto cdf = evaluate_points(b, lattice);
  const auto dens = density_points(b, lattice);

  std::ostringstream cdf_csv;
  std::ostringstream dens_csv;
  cdf_csv << coord_header(n) << "Cm\n";
  dens_csv << coord_header(n) << "density\n";
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    write_coords(cdf_csv, lattice[i]);
    cdf_csv << fmt(cdf[i]) << '\n';
    write_coords(dens_csv, lattice[i]);
    dens_csv << fmt(dens[i]) << '\n';
  }
  write_out(cfg, "_cdf.csv", cdf_csv.str());
  write_out(cfg, "_density.csv", dens_csv.str());

  manifest.set("rows", rows.size());
  manifest.set("validity", validity_json(b.validity()));
  manifest.write();
  return manifest.exit_code();
}

int run(const RunConfig& cfg) {
  try {
    if (cfg.n < 2 || cfg.n > kMaxDimension)
      throw ConfigError("--n must be in [2, " + std::to_string(kMaxDimension) + "]");
    if (cfg.m < 1) throw ConfigError("--m must be >= 1");
    if (cfg.grid != 0 && cfg.grid < 2) throw ConfigError("--grid must be >= 2");
    if (cfg.axis < 1 || cfg.axis > cfg.n) throw ConfigError("--axis must be in [1, n]");
    for (int d : cfg.degrees)
      if (d < 1) throw ConfigError("--degrees entries must be >= 1");
    std::filesystem::create_directories(cfg.out_dir);

    if (cfg.subcommand == "approximate") return cmd_approximate(cfg);
    if (cfg.subcommand == "density") return cmd_density(cfg);
    if (cfg.subcommand == "sample") return cmd_sample(cfg);
    if (cfg.subcommand == "converge") return cmd_converge(cfg);
    if (cfg.subcommand == "verify") return cmd_verify(cfg);
    if (cfg.subcommand == "fit") return cmd_fit(cfg);
    throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
  } catch (const ValidityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidCopula;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace bcop::cli
