#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "brickgen/ontology.hpp"

namespace brickgen {

struct HvacTerm {
  std::string brick_class;
  std::string description;
};

struct TopologyEdge {
  std::string source;  // term
  std::string relation;
  std::string target;  // term
  auto operator<=>(const TopologyEdge&) const = default;
};

/// Operator-supplied equipment vocabulary. Terms are stored lowercase.
class HvacTermRegistry {
 public:
  HvacTermRegistry() = default;
  HvacTermRegistry(std::map<std::string, HvacTerm, std::less<>> terms, std::vector<TopologyEdge> topology);

  const std::map<std::string, HvacTerm, std::less<>>& terms() const noexcept { return terms_; }
  const std::vector<TopologyEdge>& topology() const noexcept { return topology_; }
  bool has_term(std::string_view term) const { return terms_.find(term) != terms_.end(); }
  const HvacTerm& term(std::string_view term) const;
  bool empty() const noexcept { return terms_.empty(); }

  /// Every brick_class is an equipment class and every topology relation is
  /// registered; throws InvalidInput naming the first offender.
  void validate(const ontology::Taxonomy& tax) const;

 private:
  std::map<std::string, HvacTerm, std::less<>> terms_;
  std::vector<TopologyEdge> topology_;
};

/// { "terms": { "ac": {"brick_class": "AHU", "description": "..."} },
///   "topology": [ ["ac", "feeds", "cav"] ] }
HvacTermRegistry parse_registry_json(std::string_view text, const std::string& source = {});
HvacTermRegistry load_registry(const std::string& path);
std::string registry_to_json(const HvacTermRegistry& reg);

}  // namespace brickgen
