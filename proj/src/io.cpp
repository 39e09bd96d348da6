#include "bcop/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace bcop {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t line_no, std::size_t col) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  const std::string where = "row " + std::to_string(line_no) + ", column " + std::to_string(col);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
    throw DataError("malformed number '" + std::string(cell) + "' at " + where);
  if (!std::isfinite(v)) throw DataError("non-finite value at " + where);
  return v;
}

}  // namespace

PointSet read_csv_points(std::istream& in, bool has_header) {
  std::string line;
  std::size_t line_no = 0;
  int columns = 0;
  std::vector<double> coords;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    int col = 0;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      coords.push_back(parse_cell(rest.substr(0, comma), line_no, col + 1));
      ++col;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (columns == 0) {
      columns = col;
    } else if (col != columns) {
      throw DataError("row " + std::to_string(line_no) + " has " + std::to_string(col) +
                      " columns, expected " + std::to_string(columns));
    }
  }
  if (columns == 0) throw DataError("no data rows");
  return PointSet(columns, std::move(coords));
}

PointSet read_csv_points(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_csv_points(in, has_header);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_sample_csv(std::ostream& out, const SampleBatch& batch) {
  const int n = batch.points.dim();
  for (int r = 0; r < n; ++r) out << (r ? "," : "") << 'y' << (r + 1);
  out << '\n';
  for (std::size_t i = 0; i < batch.points.size(); ++i) {
    const auto p = batch.points[i];
    for (int r = 0; r < n; ++r) out << (r ? "," : "") << format_double(p[r]);
    out << '\n';
  }
}

nlohmann::json sample_sidecar(const SampleBatch& batch) {
  return {{"seed", batch.seed},
          {"family", batch.source.family},
          {"theta", batch.source.theta},
          {"n", batch.source.dim},
          {"m", batch.m},
          {"N", batch.points.size()}};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace bcop
