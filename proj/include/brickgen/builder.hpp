#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "brickgen/extract.hpp"
#include "brickgen/match.hpp"
#include "brickgen/ontology.hpp"
#include "brickgen/rdf.hpp"
#include "brickgen/registry.hpp"

namespace brickgen::build {

/// Module switches. Pair modules are named <source term>2<target term> after
/// the registry topology (ac2cav, cav2sdf, ...); a pair key with no explicit
/// entry follows `other_pairs`.
struct ModuleToggles {
  std::map<std::string, bool, std::less<>> pairs{
      {"ac2cav", true}, {"ac2sdf", true}, {"ac2vav", true}, {"cav2sdf", true}};
  bool other_pairs = true;
  bool point_connection = true;
  bool tagging = true;
  bool reasoning = true;

  bool pair_enabled(std::string_view key) const;
  /// Names of every module switch, pairs first.
  std::vector<std::string> names() const;
  void set(std::string_view name, bool on);
  bool get(std::string_view name) const;

  static ModuleToggles all_on();
  static ModuleToggles all_off();
  /// "all", "none", "point_connection,tagging" (only these on), or
  /// "-tagging,-ac2cav" (everything except these).
  static ModuleToggles parse(std::string_view list);
  std::string to_string() const;
};

struct BuildConfig {
  std::string prefix = "bldg";
  rdf::Iri base{"http://example.org/building#"};
  ModuleToggles toggles;
};

struct EquipmentNode {
  extract::EquipmentRef ref;
  std::string brick_class;
  rdf::Iri iri;
};

/// One node per distinct (term, number); unknown terms are skipped.
std::vector<EquipmentNode> detect_equipment(const std::vector<extract::TokenizedPoint>& points,
                                            const HvacTermRegistry& reg, const BuildConfig& cfg);
rdf::Iri equipment_iri(const extract::EquipmentRef& ref, const BuildConfig& cfg);

/// Capitalized tag words for a class and all its superclasses.
std::set<std::string> tags_for_class(const ontology::Taxonomy& tax, std::string_view cls);
rdf::Iri tag_iri(std::string_view tag);

/// Superclass types and registered inverses missing from `graph`.
rdf::Graph apply_reasoning(const rdf::Graph& graph, const ontology::Taxonomy& tax);
/// hasTag triples for every subject typed with a point class.
rdf::Graph apply_tagging(const rdf::Graph& graph, const ontology::Taxonomy& tax);

struct BuildResult {
  rdf::Graph graph;
  /// Triples each module contributed; "base" is always present.
  std::map<std::string, rdf::Graph, std::less<>> modules;
  std::map<std::string, rdf::Iri, std::less<>> point_iris;  // code -> IRI, included points only
  std::vector<EquipmentNode> nodes;
  std::vector<std::string> unknown_terms;
};

/// Composes the model. Points take part when their match has a class and is
/// not excluded. `extra_units` adds equipment nodes not reached through
/// included points.
BuildResult build_model(const std::vector<extract::TokenizedPoint>& points,
                        const std::vector<match::MatchResult>& matches, const HvacTermRegistry& reg,
                        const ontology::Taxonomy& tax, const BuildConfig& cfg,
                        const std::map<std::string, std::string, std::less<>>& timeseries_ids,
                        const std::set<extract::EquipmentRef>& extra_units = {});

struct CompletionReport {
  std::vector<extract::EquipmentRef> created_nodes;
  std::vector<std::pair<std::string, std::string>> rematched;  // code, class
  std::vector<std::pair<std::string, std::string>> excluded;   // code, reason
  bool empty() const { return created_nodes.empty() && rematched.empty() && excluded.empty(); }
};

struct CompletionResult {
  std::vector<match::MatchResult> matches;
  CompletionReport report;
  BuildResult build;
};

/// Creates nodes for units only named by left-out points, re-matches
/// unmatched non-reserve points whose best alternate reaches half the
/// threshold, excludes the rest, then rebuilds.
CompletionResult completion_pass(const std::vector<extract::TokenizedPoint>& points,
                                 const std::vector<match::MatchResult>& matches, const HvacTermRegistry& reg,
                                 const ontology::Taxonomy& tax, const BuildConfig& build_cfg,
                                 const match::MatchConfig& match_cfg,
                                 const std::map<std::string, std::string, std::less<>>& timeseries_ids);

std::string completion_report_to_json(const CompletionReport& report);

}  // namespace brickgen::build
