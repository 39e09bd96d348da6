// bcopula: command-line experiments with Bernstein copulas.
//
//   bcopula approximate --family min --n 2 --m 8
//   bcopula sample --family clayton --theta 2 --m 8 --count 100000 --check
//   bcopula verify

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "commands.hpp"

namespace {

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> p;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) p.push_back(std::stod(cell));
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  using bcop::cli::RunConfig;
  RunConfig cfg;
  std::vector<std::string> at_points;
  std::string out_dir = ".";

  CLI::App app{"Bernstein approximation of copulas: approximation, density, sampling, "
               "convergence and identity checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BCOP_VERSION);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory")
        ->envname("BCOPULA_OUT_DIR")
        ->capture_default_str();
    sub->add_option("--name", cfg.name, "Output basename (default: the subcommand name)");
  };
  auto add_source = [&](CLI::App* sub, bool allow_data) {
    sub->add_option("--family", cfg.family, "Copula family: independence|min|w2|fgm|clayton");
    sub->add_option("--theta", cfg.theta, "Family parameter (fgm, clayton)")->capture_default_str();
    sub->add_option("--n", cfg.n, "Dimension")->capture_default_str();
    if (allow_data) {
      sub->add_option("--data", cfg.data_path, "CSV of observations (one row per observation)");
      sub->add_flag("--header", cfg.header, "Data CSV has a header row");
    }
  };
  auto add_degree = [&](CLI::App* sub) {
    sub->add_option("--m", cfg.m, "Bernstein degree")->capture_default_str();
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid,
                    "Lattice resolution per axis (default 50 for n=2, 20 for n=3, 8 above)");
  };

  auto* approximate =
      app.add_subcommand("approximate", "Tabulate C, C_m and |C_m - C| on a lattice");
  add_source(approximate, true);
  add_degree(approximate);
  add_grid(approximate);
  add_output(approximate);

  auto* density = app.add_subcommand("density", "Tabulate the density of C_m and integrate it");
  add_source(density, true);
  add_degree(density);
  add_grid(density);
  density->add_option("--quad-order", cfg.quad_order,
                      "Gauss-Legendre points per axis (default m+1)");
  add_output(density);

  auto* sample = app.add_subcommand("sample", "Draw from C_m by the order-statistics construction");
  add_source(sample, false);
  add_degree(sample);
  sample->add_option("--count", cfg.count, "Number of draws")->capture_default_str();
  sample->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  sample->add_flag("--check", cfg.check, "Compare the empirical CDF with C_m");
  sample->add_option("--check-grid", cfg.check_grid, "Interior lattice points per axis for --check")
      ->capture_default_str();
  add_output(sample);

  auto* converge =
      app.add_subcommand("converge", "Sup-error and first-partial error along a degree ladder");
  add_source(converge, false);
  converge->add_option("--degrees", cfg.degrees, "Degree ladder")
      ->delimiter(',')
      ->capture_default_str();
  add_grid(converge);
  converge->add_option("--axis", cfg.axis, "Axis of the partial derivative (1-based)")
      ->capture_default_str();
  converge->add_option("--at", at_points,
                       "Interior point for the derivative study, e.g. 0.3,0.6 (repeatable; "
                       "default the cube centre)");
  add_output(converge);

  auto* verify = app.add_subcommand("verify", "Run the basis identity and rate checks");
  verify->add_option("--trials", cfg.trials, "Random trials per identity")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  verify->add_option("--inject-fault", cfg.inject_fault,
                     "Testing only: perturb the named check so it fails");
  add_output(verify);

  auto* fit = app.add_subcommand("fit", "Smooth the empirical copula of a data set");
  fit->add_option("--data", cfg.data_path, "CSV of observations")->required();
  fit->add_flag("--header", cfg.header, "Data CSV has a header row");
  add_degree(fit);
  add_grid(fit);
  add_output(fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? bcop::cli::kExitOk : bcop::cli::kExitConfigError;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.out_dir = out_dir;
  try {
    for (const auto& text : at_points) cfg.at.push_back(parse_point(text));
  } catch (const std::exception&) {
    std::cerr << "error: malformed --at point\n";
    return bcop::cli::kExitConfigError;
  }
  return bcop::cli::run(cfg);
}
