#include "covf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "covf/error.hpp"

namespace covf::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_field(const std::string& field, long long row) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  const auto result = std::from_chars(begin, end, value);
  require(result.ec == std::errc() && std::isfinite(value), errc::non_finite,
          "non-finite or unparsable value in data row " + std::to_string(row));
  return value;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

SampledPath parse_observations_csv(const std::string& file_path) {
  std::ifstream in(file_path);
  require(in.good(), errc::empty_file, "cannot open " + file_path);

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::empty_file,
          file_path + " is empty");
  const auto header = split_csv_line(strip_cr(line));
  require(header.size() >= 2 && header[0] == "time", errc::bad_config,
          "expected header time,y1,...,yd");
  const int dim = static_cast<int>(header.size()) - 1;
  for (int i = 0; i < dim; ++i) {
    require(header[i + 1] == "y" + std::to_string(i + 1), errc::bad_config,
            "expected header column y" + std::to_string(i + 1));
  }

  std::vector<double> times;
  std::vector<double> values;
  long long row = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    ++row;
    const auto fields = split_csv_line(line);
    require(static_cast<int>(fields.size()) == dim + 1, errc::bad_config,
            "wrong field count in data row " + std::to_string(row));
    times.push_back(parse_field(fields[0], row));
    for (int i = 0; i < dim; ++i) values.push_back(parse_field(fields[i + 1], row));
  }
  require(times.size() >= 2, errc::empty_file,
          file_path + " has fewer than 2 data rows");

  // Spacing from the first pair, then every subsequent gap within 1e-9
  // relative; the failing row index is 1-based over data rows.
  const double spacing = times[1] - times[0];
  require(spacing > 0.0, errc::not_equidistant, "times must be increasing (row 2)");
  require(std::abs(times[0]) <= 1e-9, errc::not_equidistant,
          "the grid must start at t = 0 (row 1)");
  for (std::size_t i = 2; i < times.size(); ++i) {
    const double gap = times[i] - times[i - 1];
    require(std::abs(gap - spacing) <= 1e-9 * spacing, errc::not_equidistant,
            "grid is not equidistant at row " + std::to_string(i + 1));
  }

  const auto n = static_cast<long long>(std::llround(1.0 / spacing));
  require(n >= 1 && std::abs(spacing * static_cast<double>(n) - 1.0) <= 1e-6,
          errc::not_equidistant,
          "spacing is not a unit fraction 1/n of the time unit");
  const double horizon =
      static_cast<double>(times.size() - 1) / static_cast<double>(n);
  return SampledPath(TimeGrid(n, horizon), dim, std::move(values));
}

void write_observations_csv(const std::string& file_path, const SampledPath& y) {
  std::ofstream out(file_path);
  require(out.good(), errc::bad_config, "cannot open " + file_path);
  out << "time";
  for (int i = 1; i <= y.dim(); ++i) out << ",y" << i;
  out << "\n";
  for (long long m = 0; m < y.count(); ++m) {
    out << format_double(y.grid().time(m));
    for (int i = 0; i < y.dim(); ++i) out << "," << format_double(y.value(m, i));
    out << "\n";
  }
}

void write_matrix_path_csv(const std::string& file_path, const SymMatrixPath& path,
                           const std::vector<long long>* clamped_per_row) {
  std::ofstream out(file_path);
  require(out.good(), errc::bad_config, "cannot open " + file_path);
  require(clamped_per_row == nullptr || clamped_per_row->size() == path.size(),
          errc::invalid_params, "clamp column length mismatch");
  out << "time";
  for (int i = 0; i < path.dim(); ++i) {
    for (int j = i; j < path.dim(); ++j) out << ",x" << (i + 1) << (j + 1);
  }
  if (clamped_per_row) out << ",clamped";
  out << "\n";
  for (std::size_t p = 0; p < path.size(); ++p) {
    out << format_double(path.time(p));
    for (int i = 0; i < path.dim(); ++i) {
      for (int j = i; j < path.dim(); ++j) {
        out << "," << format_double(path.entry(p, i, j));
      }
    }
    if (clamped_per_row) out << "," << (*clamped_per_row)[p];
    out << "\n";
  }
}

SymMatrixPath parse_matrix_path_csv(const std::string& file_path) {
  std::ifstream in(file_path);
  require(in.good(), errc::empty_file, "cannot open " + file_path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::empty_file,
          file_path + " is empty");
  auto header = split_csv_line(strip_cr(line));
  require(header.size() >= 2 && header[0] == "time", errc::bad_config,
          "expected header time,x11,...");
  bool has_clamped = header.back() == "clamped";
  const int packed = static_cast<int>(header.size()) - 1 - (has_clamped ? 1 : 0);
  int dim = 0;
  while (dim * (dim + 1) / 2 < packed) ++dim;
  require(dim * (dim + 1) / 2 == packed, errc::bad_config,
          "column count is not an upper triangle");

  std::vector<double> times;
  std::vector<double> values;
  long long row = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    ++row;
    const auto fields = split_csv_line(line);
    require(static_cast<int>(fields.size()) == packed + 1 + (has_clamped ? 1 : 0),
            errc::bad_config, "wrong field count in data row " + std::to_string(row));
    times.push_back(parse_field(fields[0], row));
    for (int e = 0; e < packed; ++e) values.push_back(parse_field(fields[e + 1], row));
  }
  require(!times.empty(), errc::empty_file, file_path + " has no data rows");
  return SymMatrixPath(std::move(times), dim, std::move(values));
}

void write_jumps_csv(const std::string& file_path,
                     const std::vector<sim::JumpEvent>& y_jumps,
                     const std::vector<sim::JumpEvent>& x_jumps) {
  std::ofstream out(file_path);
  require(out.good(), errc::bad_config, "cannot open " + file_path);
  out << "time,process,component,mark\n";
  for (const auto& jump : y_jumps) {
    out << format_double(jump.time) << ",y," << (jump.component + 1) << ","
        << format_double(jump.mark) << "\n";
  }
  for (const auto& jump : x_jumps) {
    out << format_double(jump.time) << ",x11," << (jump.component + 1) << ","
        << format_double(jump.mark) << "\n";
  }
}

}  // namespace covf::io
