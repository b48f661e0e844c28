#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "scn/core/trajectory.hpp"

namespace scn {

/// CSV with header `t,<dim1>,...,<dimk>`, one row per grid point, 17
/// significant digits, LF line endings.
std::string format_trace_csv(const Trajectory& c);
void write_trace_csv(const std::filesystem::path& path, const Trajectory& c);

/// Parses a trace against `schema`. The header must name the schema's
/// dimensions in order. The grid step is taken from the time column; for a
/// single-row trace `step_hint` (or the default step) is used.
Trajectory parse_trace_csv(const std::string& text, const SchemaPtr& schema,
                           std::optional<double> step_hint = std::nullopt);
Trajectory read_trace_csv(const std::filesystem::path& path, const SchemaPtr& schema,
                          std::optional<double> step_hint = std::nullopt);

/// Schema sidecar: {"dimensions":[{"name":...,"unit":...}]}.
std::string format_schema_json(const SceneSchema& schema);
SchemaPtr parse_schema_json(const std::string& text);
void write_schema_json(const std::filesystem::path& path, const SceneSchema& schema);
SchemaPtr read_schema_json(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest decimal with 17 significant digits, as used in trace files.
std::string format_real(double value);

}  // namespace scn
