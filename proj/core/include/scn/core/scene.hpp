#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scn {

enum class Unit { Meter, MeterPerSecond, MeterPerSecondSq, Second, Dimensionless, EnumCode };

std::string_view to_string(Unit unit);
/// Accepts the canonical spellings ("m", "m/s", "m/s^2", "s", "dimensionless",
/// "enum-code") plus "m/s²".
std::optional<Unit> parse_unit(std::string_view text);

struct Dimension {
  std::string name;
  Unit unit = Unit::Dimensionless;

  friend bool operator==(const Dimension&, const Dimension&) = default;
};

/// Ordered, fixed-size list of named scene dimensions.
class SceneSchema {
 public:
  explicit SceneSchema(std::vector<Dimension> dimensions);

  std::size_t size() const noexcept { return dimensions_.size(); }
  const std::vector<Dimension>& dimensions() const noexcept { return dimensions_; }
  const Dimension& operator[](std::size_t i) const { return dimensions_[i]; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Like find() but throws SchemaError for unknown names.
  std::size_t index_of(std::string_view name) const;

  friend bool operator==(const SceneSchema& a, const SceneSchema& b) {
    return a.dimensions_ == b.dimensions_;
  }

 private:
  std::vector<Dimension> dimensions_;
};

using SchemaPtr = std::shared_ptr<const SceneSchema>;

SchemaPtr make_schema(std::vector<Dimension> dimensions);

/// Structural schema equality with a pointer fast path.
bool same_schema(const SchemaPtr& a, const SchemaPtr& b);
void require_same_schema(const SchemaPtr& a, const SchemaPtr& b);

/// A snapshot of the world: one finite value per schema dimension.
class Scene {
 public:
  Scene(SchemaPtr schema, std::vector<double> values);

  const SchemaPtr& schema() const noexcept { return schema_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::string_view dimension) const;

  /// Copy with one entry replaced (validated).
  Scene with(std::size_t index, double value) const;

  /// Bit-exact value equality on the same schema.
  friend bool operator==(const Scene& a, const Scene& b);

 private:
  SchemaPtr schema_;
  std::vector<double> values_;
};

/// Throws ValueError when values are non-finite or an enum-code entry is not
/// an integer.
void validate_scene_values(const SceneSchema& schema, std::span<const double> values);

/// Euclidean distance on schema-ordered values.
double scene_distance(const Scene& a, const Scene& b);
double scene_distance(std::span<const double> a, std::span<const double> b);

/// Component-wise match with tolerance `tol * max(1, |b_i|)`.
bool scenes_match(std::span<const double> a, std::span<const double> b, double tol);

}  // namespace scn
