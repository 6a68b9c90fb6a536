#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "brickgen/rdf.hpp"

namespace brickgen::ontology {

enum class ClassKind { point, equipment, location };

std::string_view to_string(ClassKind kind);
ClassKind kind_from_string(std::string_view text);

struct BrickClass {
  std::string name;
  std::optional<std::string> superclass;
  ClassKind kind;
};

struct RelationDef {
  std::string name;
  std::string inverse;
};

/// Curated Brick class hierarchy plus the relation registry.
///
/// Immutable once built. Every superclass resolves, chains are acyclic and
/// end at a root, and kinds agree along each chain. Relation inverses are
/// symmetric: a relation declared with inverse `i` and no entry for `i` gets
/// the reverse entry added.
class Taxonomy {
 public:
  Taxonomy(rdf::Iri ns, std::vector<BrickClass> classes, std::vector<RelationDef> relations);

  const rdf::Iri& namespace_iri() const noexcept { return ns_; }
  const std::map<std::string, BrickClass, std::less<>>& classes() const noexcept { return classes_; }
  const std::map<std::string, RelationDef, std::less<>>& relations() const noexcept { return relations_; }

  bool has_class(std::string_view name) const;
  const BrickClass& get(std::string_view name) const;

  /// Immediate superclass first, root last; excludes `name`.
  std::vector<std::string> superclass_chain(std::string_view name) const;
  std::size_t depth(std::string_view name) const { return superclass_chain(name).size(); }
  /// Reflexive: a class is a subclass of itself.
  bool is_subclass_of(std::string_view name, std::string_view ancestor) const;

  /// Lowercase underscore-separated parts of the class name.
  std::set<std::string> class_tokens(std::string_view name) const;

  bool has_relation(std::string_view name) const;
  const std::string& relation_inverse(std::string_view name) const;

  rdf::Iri class_iri(std::string_view name) const;
  rdf::Iri relation_iri(std::string_view name) const;
  /// Class name when `iri` is a known class under the taxonomy namespace.
  std::optional<std::string> class_of(const rdf::Iri& iri) const;
  std::optional<std::string> relation_of(const rdf::Iri& iri) const;

 private:
  rdf::Iri ns_;
  std::map<std::string, BrickClass, std::less<>> classes_;
  std::map<std::string, RelationDef, std::less<>> relations_;
};

/// Taxonomy JSON:
/// { "namespace": "...", "classes": [ {"name", "superclass", "kind"} ],
///   "relations": [ {"name", "inverse"} ] }
Taxonomy load_taxonomy(const std::string& path);
Taxonomy parse_taxonomy_json(std::string_view text, const std::string& source = {});

/// Builds a taxonomy from rdfs:subClassOf and owl:inverseOf triples. Roots
/// are the classes named Point, Equipment and Location; kinds follow from
/// the root each class reaches.
Taxonomy taxonomy_from_graph(const rdf::Graph& graph, const rdf::Iri& ns);

}  // namespace brickgen::ontology
