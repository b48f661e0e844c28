#include "scn/core/scene.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "scn/error.hpp"

namespace scn {

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::Meter: return "m";
    case Unit::MeterPerSecond: return "m/s";
    case Unit::MeterPerSecondSq: return "m/s^2";
    case Unit::Second: return "s";
    case Unit::Dimensionless: return "dimensionless";
    case Unit::EnumCode: return "enum-code";
  }
  return "dimensionless";
}

std::optional<Unit> parse_unit(std::string_view text) {
  if (text == "m") return Unit::Meter;
  if (text == "m/s") return Unit::MeterPerSecond;
  if (text == "m/s^2" || text == "m/s²" || text == "m/s2") return Unit::MeterPerSecondSq;
  if (text == "s") return Unit::Second;
  if (text == "dimensionless") return Unit::Dimensionless;
  if (text == "enum-code") return Unit::EnumCode;
  return std::nullopt;
}

SceneSchema::SceneSchema(std::vector<Dimension> dimensions) : dimensions_(std::move(dimensions)) {
  if (dimensions_.empty()) throw SchemaError("schema needs at least one dimension");
  std::set<std::string_view> seen;
  for (const auto& d : dimensions_) {
    if (d.name.empty()) throw SchemaError("dimension names must be nonempty");
    if (!seen.insert(d.name).second) throw SchemaError(fmt::format("duplicate dimension '{}'", d.name));
  }
}

std::optional<std::size_t> SceneSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < dimensions_.size(); ++i) {
    if (dimensions_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t SceneSchema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw SchemaError(fmt::format("unknown dimension '{}'", name));
}

SchemaPtr make_schema(std::vector<Dimension> dimensions) {
  return std::make_shared<const SceneSchema>(std::move(dimensions));
}

bool same_schema(const SchemaPtr& a, const SchemaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void require_same_schema(const SchemaPtr& a, const SchemaPtr& b) {
  if (!same_schema(a, b)) throw SchemaError("scene schemas differ");
}

void validate_scene_values(const SceneSchema& schema, std::span<const double> values) {
  if (values.size() != schema.size()) {
    throw SchemaError(fmt::format("scene has {} values, schema has {} dimensions", values.size(), schema.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValueError(fmt::format("dimension '{}' is not finite", schema[i].name));
    }
    if (schema[i].unit == Unit::EnumCode && std::trunc(values[i]) != values[i]) {
      throw ValueError(fmt::format("enum-code dimension '{}' holds non-integer {}", schema[i].name, values[i]));
    }
  }
}

Scene::Scene(SchemaPtr schema, std::vector<double> values)
    : schema_(std::move(schema)), values_(std::move(values)) {
  if (!schema_) throw SchemaError("scene without schema");
  validate_scene_values(*schema_, values_);
}

double Scene::at(std::string_view dimension) const { return values_[schema_->index_of(dimension)]; }

Scene Scene::with(std::size_t index, double value) const {
  auto values = values_;
  values.at(index) = value;
  return Scene(schema_, std::move(values));
}

bool operator==(const Scene& a, const Scene& b) {
  return same_schema(a.schema_, b.schema_) && a.values_ == b.values_;
}

double scene_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw SchemaError("scene sizes differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double scene_distance(const Scene& a, const Scene& b) {
  require_same_schema(a.schema(), b.schema());
  return scene_distance(a.values(), b.values());
}

bool scenes_match(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(b[i]))) return false;
  }
  return true;
}

}  // namespace scn
