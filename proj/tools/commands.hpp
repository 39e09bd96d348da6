#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace bcop::cli {

// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInvalidCopula = 3;

struct RunConfig {
  std::string subcommand;
  std::string family;
  double theta = 0.0;
  std::string data_path;
  bool header = false;
  int n = 2;
  int m = 8;
  std::vector<int> degrees{4, 16, 64, 256};
  int grid = 0;  // 0 = per-dimension default
  std::size_t count = 100000;
  std::uint64_t seed = 0;
  bool check = false;
  int check_grid = 5;
  int axis = 1;  // 1-based on the command line
  std::vector<std::vector<double>> at;
  int quad_order = 0;  // 0 = m + 1
  int trials = 10000;
  std::string inject_fault;
  std::filesystem::path out_dir = ".";
  std::string name;

  int resolved_grid() const;
  std::string basename() const { return name.empty() ? subcommand : name; }
  nlohmann::json to_json() const;
};

/// Each returns a process exit code; errors are mapped by run().
int cmd_approximate(const RunConfig& cfg);
int cmd_density(const RunConfig& cfg);
int cmd_sample(const RunConfig& cfg);
int cmd_converge(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_fit(const RunConfig& cfg);

/// Dispatches on cfg.subcommand and maps exceptions to exit codes.
int run(const RunConfig& cfg);

}  // namespace bcop::cli
