#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "brickgen/ontology.hpp"
#include "brickgen/rdf.hpp"

namespace brickgen::validation {

struct RequiredPoint {
  std::string role;
  std::string cls;
  bool operator==(const RequiredPoint&) const = default;
};

struct Template {
  std::string name;
  std::string target_class;
  std::vector<RequiredPoint> required_points;
  std::vector<std::string> dependencies;
  bool operator==(const Template&) const = default;
};

/// Checked set of templates: classes exist, names unique, dependencies
/// resolve and are acyclic. Templates named as another's dependency are
/// building blocks; only the rest are applied to instances.
class TemplateLibrary {
 public:
  TemplateLibrary() = default;
  TemplateLibrary(std::vector<Template> templates, const ontology::Taxonomy& tax);

  const std::vector<Template>& templates() const noexcept { return templates_; }
  bool empty() const noexcept { return templates_.empty(); }
  const Template& get(std::string_view name) const;

  /// Own required points followed by those of every transitive dependency,
  /// depth first in declaration order.
  std::vector<RequiredPoint> requirements(std::string_view name) const;
  /// Templates applied to instances, in name order.
  std::vector<std::string> top_level() const;

 private:
  std::vector<Template> templates_;
};

/// YAML for .yaml/.yml, JSON otherwise. The document is a template, a list
/// of templates, or {"templates": [...]}; an empty document is no templates.
std::vector<Template> parse_templates(std::string_view text, bool yaml, const std::string& source = {});
TemplateLibrary load_templates(const std::string& path, const ontology::Taxonomy& tax);

enum class Status { pass, fail };

struct InstanceResult {
  std::string equipment;  // IRI
  std::string template_name;
  Status status = Status::pass;
  std::vector<std::string> missing;  // point classes, requirement order
  bool operator==(const InstanceResult&) const = default;
};

struct ValidationReport {
  std::vector<InstanceResult> results;  // IRI order
  std::size_t passed = 0;
  std::size_t failed = 0;
  bool ok() const noexcept { return failed == 0; }
};

/// Each subject typed with a top-level template's target class (or a
/// subclass) is checked once, against the template with the most specific
/// target; ties go to the lower name. A requirement is met by any hasPoint
/// object typed with the required class or a descendant.
ValidationReport validate(const rdf::Graph& graph, const TemplateLibrary& templates, const ontology::Taxonomy& tax);

std::string report_to_json(const ValidationReport& report);
ValidationReport report_from_json(std::string_view text, const std::string& source = {});
std::string report_to_table(const ValidationReport& report);

}  // namespace brickgen::validation
