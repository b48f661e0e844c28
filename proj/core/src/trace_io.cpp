#include "scn/core/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "scn/error.hpp"

namespace scn {

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

std::string format_trace_csv(const Trajectory& c) {
  std::string out = "t";
  for (const auto& d : c.schema()->dimensions()) {
    out += ',';
    out += d.name;
  }
  out += '\n';
  for (std::size_t i = 0; i < c.count(); ++i) {
    out += format_real(c.grid().time(i));
    for (double v : c.values(i)) {
      out += ',';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << text;
}

void write_trace_csv(const std::filesystem::path& path, const Trajectory& c) {
  write_text_file(path, format_trace_csv(c));
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& field, std::size_t row) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw IoError(fmt::format("row {}: '{}' is not a number", row, field));
  }
  return value;
}

}  // namespace

Trajectory parse_trace_csv(const std::string& text, const SchemaPtr& schema, std::optional<double> step_hint) {
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      auto nl = text.find('\n', start);
      if (nl == std::string::npos) nl = text.size();
      std::string line = text.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(std::move(line));
      start = nl + 1;
    }
  }
  if (lines.empty()) throw IoError("empty trace file");
  const auto header = split_fields(lines[0]);
  if (header.size() != schema->size() + 1 || header[0] != "t") {
    throw SchemaError(fmt::format("trace header has {} columns, expected t plus {} dimensions", header.size(),
                                  schema->size()));
  }
  for (std::size_t j = 0; j < schema->size(); ++j) {
    if (header[j + 1] != (*schema)[j].name) {
      throw SchemaError(fmt::format("trace column '{}' does not match dimension '{}'", header[j + 1], (*schema)[j].name));
    }
  }
  std::vector<double> times;
  std::vector<double> data;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != header.size()) throw IoError(fmt::format("row {} has {} fields", r, fields.size()));
    times.push_back(parse_double(fields[0], r));
    for (std::size_t j = 1; j < fields.size(); ++j) data.push_back(parse_double(fields[j], r));
  }
  if (times.empty()) throw IoError("trace has a header but no rows");
  double step = step_hint.value_or(times.size() > 1 ? times[1] - times[0] : kDefaultStep);
  if (!step_hint && times.size() > 1) {
    // t_1 is rounded to 17 digits; recover the step from the full span.
    step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  }
  TimeGrid grid(step, times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - grid.time(i)) > kGridAlignmentTolerance * step + 1e-12 * std::abs(times[i])) {
      throw GridAlignmentError(fmt::format("row {} time {} is off the uniform grid", i + 1, times[i]));
    }
  }
  return Trajectory(schema, grid, std::move(data));
}

Trajectory read_trace_csv(const std::filesystem::path& path, const SchemaPtr& schema, std::optional<double> step_hint) {
  return parse_trace_csv(read_text_file(path), schema, step_hint);
}

std::string format_schema_json(const SceneSchema& schema) {
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& d : schema.dimensions()) dims.push_back({{"name", d.name}, {"unit", std::string(to_string(d.unit))}});
  return nlohmann::json{{"dimensions", dims}}.dump(2) + "\n";
}

SchemaPtr parse_schema_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("schema sidecar is not JSON: {}", e.what()));
  }
  if (!j.contains("dimensions") || !j["dimensions"].is_array()) throw SchemaError("schema sidecar lacks 'dimensions'");
  std::vector<Dimension> dims;
  for (const auto& d : j["dimensions"]) {
    if (!d.contains("name") || !d["name"].is_string()) throw SchemaError("dimension without name");
    const std::string unit_text = d.value("unit", std::string("dimensionless"));
    auto unit = parse_unit(unit_text);
    if (!unit) throw SchemaError(fmt::format("unknown unit '{}'", unit_text));
    dims.push_back({d["name"].get<std::string>(), *unit});
  }
  return make_schema(std::move(dims));
}

void write_schema_json(const std::filesystem::path& path, const SceneSchema& schema) {
  write_text_file(path, format_schema_json(schema));
}

SchemaPtr read_schema_json(const std::filesystem::path& path) { return parse_schema_json(read_text_file(path)); }

}  // namespace scn
