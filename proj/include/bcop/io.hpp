#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "bcop/kemperman.hpp"
#include "bcop/tensor.hpp"

namespace bcop {

/// Malformed input data; the message names the offending row.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric CSV, one observation per row, '.' decimal point. Blank lines are
/// skipped. Rows must all have the same column count; NaN and infinite cells
/// are rejected.
PointSet read_csv_points(std::istream& in, bool has_header);
PointSet read_csv_points(const std::filesystem::path& path, bool has_header);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Header `y1,...,yn` then one row per point.
void write_sample_csv(std::ostream& out, const SampleBatch& batch);

/// Seed, family, theta, n, m and N for a sample batch.
nlohmann::json sample_sidecar(const SampleBatch& batch);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace bcop
