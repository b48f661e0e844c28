#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scn/dsl/document.hpp"
#include "scn/logic/abstract.hpp"
#include "scn/logical/logical_scenario.hpp"

namespace scn::dsl {

/// Raised when a document has diagnostics; carries all of them.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Runtime objects built from a checked document. Logical scenarios are built
/// eagerly, abstract scenarios on request.
class CompiledSpec {
 public:
  explicit CompiledSpec(SpecDocument document);

  const SpecDocument& document() const noexcept { return document_; }

  SchemaPtr schema(std::string_view name) const;
  const LogicalScenario& logical(std::string_view name) const;
  const ParameterDistribution& distribution(std::string_view name) const;
  AbstractScenario abstract_scenario(std::string_view name) const;
  /// A fixture bound to a schema.
  Formula fixture(std::string_view name, const SchemaPtr& schema) const;
  Formula formula(const FormulaSyntax& f, const SchemaPtr& schema) const;

  std::vector<std::string> logical_names() const;
  std::vector<std::string> abstract_names() const;

 private:
  struct Logical {
    std::shared_ptr<const LogicalScenario> scenario;
    ParameterDistribution distribution;
  };

  SpecDocument document_;
  std::map<std::string, SchemaPtr, std::less<>> schemas_;
  std::map<std::string, Logical, std::less<>> logicals_;
};

/// parse() then compile; ParseError on diagnostics.
CompiledSpec compile(std::string_view text);
CompiledSpec compile_file(const std::filesystem::path& path);

}  // namespace scn::dsl
