#include "brickgen/registry.hpp"

#include <algorithm>
#include <cctype>

#include "brickgen/error.hpp"
#include "fsutil.hpp"
#include "jsonutil.hpp"

namespace brickgen {

namespace {

bool valid_term(std::string_view t) {
  return !t.empty() && std::isalpha(static_cast<unsigned char>(t.front())) &&
         std::all_of(t.begin(), t.end(), [](char c) {
           return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c));
         });
}

}  // namespace

HvacTermRegistry::HvacTermRegistry(std::map<std::string, HvacTerm, std::less<>> terms,
                                   std::vector<TopologyEdge> topology)
    : terms_(std::move(terms)), topology_(std::move(topology)) {
  for (const auto& [name, t] : terms_) {
    if (!valid_term(name)) throw InvalidInput("invalid HVAC term '" + name + "' (lowercase letters and digits)");
    if (t.brick_class.empty()) throw InvalidInput("HVAC term '" + name + "' has no brick_class");
  }
  for (const auto& e : topology_) {
    for (const auto* end : {&e.source, &e.target}) {
      if (!has_term(*end)) throw InvalidInput("topology edge references unknown term '" + *end + "'");
    }
    if (e.relation.empty()) throw InvalidInput("topology edge " + e.source + "->" + e.target + " has no relation");
  }
  std::sort(topology_.begin(), topology_.end());
  topology_.erase(std::unique(topology_.begin(), topology_.end()), topology_.end());
}

const HvacTerm& HvacTermRegistry::term(std::string_view term) const {
  auto it = terms_.find(term);
  if (it == terms_.end()) throw NotFound("unknown HVAC term '" + std::string(term) + "'");
  return it->second;
}

void HvacTermRegistry::validate(const ontology::Taxonomy& tax) const {
  for (const auto& [name, t] : terms_) {
    if (!tax.has_class(t.brick_class)) {
      throw InvalidInput("HVAC term '" + name + "' maps to unknown class '" + t.brick_class + "'");
    }
    if (tax.get(t.brick_class).kind != ontology::ClassKind::equipment) {
      throw InvalidInput("HVAC term '" + name + "' maps to non-equipment class '" + t.brick_class + "'");
    }
  }
  for (const auto& e : topology_) {
    if (!tax.has_relation(e.relation)) {
      throw InvalidInput("topology edge " + e.source + "->" + e.target + " uses unknown relation '" + e.relation + "'");
    }
  }
}

HvacTermRegistry parse_registry_json(std::string_view text, const std::string& source) {
  const auto doc = detail::parse_json(text, source);
  const std::string ctx = source.empty() ? "registry" : source;
  std::map<std::string, HvacTerm, std::less<>> terms;
  const auto& jterms = detail::require_member(doc, "terms", ctx);
  if (!jterms.is_object()) throw InvalidInput(ctx + ": 'terms' must be an object");
  for (const auto& [key, value] : jterms.items()) {
    HvacTerm t;
    t.brick_class = detail::require_string(value, "brick_class", ctx + " term '" + key + "'");
    if (value.contains("description") && value.at("description").is_string()) {
      t.description = value.at("description").get<std::string>();
    }
    terms.emplace(key, std::move(t));
  }
  std::vector<TopologyEdge> topology;
  if (doc.contains("topology")) {
    const auto& jtop = doc.at("topology");
    if (!jtop.is_array()) throw InvalidInput(ctx + ": 'topology' must be an array");
    for (const auto& e : jtop) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string() || !e[2].is_string()) {
        throw InvalidInput(ctx + ": topology entries are [source, relation, target]");
      }
      topology.push_back({e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<std::string>()});
    }
  }
  return HvacTermRegistry(std::move(terms), std::move(topology));
}

HvacTermRegistry load_registry(const std::string& path) { return parse_registry_json(detail::read_file(path), path); }

std::string registry_to_json(const HvacTermRegistry& reg) {
  detail::json doc;
  doc["terms"] = detail::json::object();
  for (const auto& [name, t] : reg.terms()) {
    doc["terms"][name] = {{"brick_class", t.brick_class}, {"description", t.description}};
  }
  doc["topology"] = detail::json::array();
  for (const auto& e : reg.topology()) doc["topology"].push_back({e.source, e.relation, e.target});
  return detail::dump_pretty(doc);
}

}  // namespace brickgen
