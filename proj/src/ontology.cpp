#include "brickgen/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <utility>

#include "brickgen/error.hpp"
#include "fsutil.hpp"
#include "jsonutil.hpp"

namespace brickgen::ontology {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

std::string_view to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::point: return "point";
    case ClassKind::equipment: return "equipment";
    case ClassKind::location: return "location";
  }
  return "point";
}

ClassKind kind_from_string(std::string_view text) {
  if (text == "point") return ClassKind::point;
  if (text == "equipment") return ClassKind::equipment;
  if (text == "location") return ClassKind::location;
  throw InvalidInput("unknown class kind '" + std::string(text) + "'");
}

Taxonomy::Taxonomy(rdf::Iri ns, std::vector<BrickClass> classes, std::vector<RelationDef> relations)
    : ns_(std::move(ns)) {
  if (classes.empty()) throw InvalidInput("empty taxonomy");
  const char last = ns_.str().back();
  if (last != '#' && last != '/') throw InvalidInput("taxonomy namespace must end in '#' or '/'");

  for (auto& c : classes) {
    if (!is_identifier(c.name)) throw InvalidInput("invalid class name '" + c.name + "'");
    const std::string name = c.name;
    if (!classes_.emplace(name, std::move(c)).second) throw InvalidInput("duplicate class '" + name + "'");
  }

  for (const auto& [name, cls] : classes_) {
    if (cls.superclass && !classes_.contains(*cls.superclass)) {
      throw InvalidInput("class '" + name + "' has unknown superclass '" + *cls.superclass + "'");
    }
  }

  // Walking more than |classes| steps means the chain revisits a class.
  for (const auto& [name, cls] : classes_) {
    const BrickClass* cur = &cls;
    std::size_t steps = 0;
    while (cur->superclass) {
      const BrickClass& parent = classes_.at(*cur->superclass);
      if (parent.name == name || ++steps > classes_.size()) {
        throw InvalidInput("superclass cycle involving class '" + name + "'");
      }
      if (parent.kind != cls.kind) {
        throw InvalidInput("class '" + name + "' is a " + std::string(to_string(cls.kind)) +
                           " but its ancestor '" + parent.name + "' is a " + std::string(to_string(parent.kind)));
      }
      cur = &parent;
    }
  }

  for (auto& r : relations) {
    if (!is_identifier(r.name) || !is_identifier(r.inverse)) {
      throw InvalidInput("invalid relation '" + r.name + "' / '" + r.inverse + "'");
    }
    auto [it, inserted] = relations_.emplace(r.name, r);
    if (!inserted && it->second.inverse != r.inverse) {
      throw InvalidInput("relation '" + r.name + "' declared with two different inverses");
    }
  }
  std::vector<RelationDef> implied;
  for (const auto& [name, rel] : relations_) {
    auto inv = relations_.find(rel.inverse);
    if (inv == relations_.end()) {
      implied.push_back({rel.inverse, name});
    } else if (inv->second.inverse != name) {
      throw InvalidInput("relation '" + name + "' has inverse '" + rel.inverse + "' whose inverse is '" +
                         inv->second.inverse + "'");
    }
  }
  for (auto& r : implied) relations_.emplace(r.name, r);
}

bool Taxonomy::has_class(std::string_view name) const { return classes_.find(name) != classes_.end(); }

const BrickClass& Taxonomy::get(std::string_view name) const {
  auto it = classes_.find(name);
  if (it == classes_.end()) throw NotFound("unknown class '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> Taxonomy::superclass_chain(std::string_view name) const {
  std::vector<std::string> chain;
  const BrickClass* cur = &get(name);
  while (cur->superclass) {
    chain.push_back(*cur->superclass);
    cur = &classes_.find(*cur->superclass)->second;
  }
  return chain;
}

bool Taxonomy::is_subclass_of(std::string_view name, std::string_view ancestor) const {
  const BrickClass* cur = &get(name);
  while (true) {
    if (cur->name == ancestor) return true;
    if (!cur->superclass) return false;
    cur = &classes_.find(*cur->superclass)->second;
  }
}

std::set<std::string> Taxonomy::class_tokens(std::string_view name) const {
  const BrickClass& cls = get(name);
  std::set<std::string> tokens;
  std::string cur;
  for (char c : cls.name) {
    if (c == '_') {
      if (!cur.empty()) tokens.insert(std::exchange(cur, {}));
    } else {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!cur.empty()) tokens.insert(cur);
  return tokens;
}

bool Taxonomy::has_relation(std::string_view name) const { return relations_.find(name) != relations_.end(); }

const std::string& Taxonomy::relation_inverse(std::string_view name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw NotFound("unknown relation '" + std::string(name) + "'");
  return it->second.inverse;
}

rdf::Iri Taxonomy::class_iri(std::string_view name) const { return rdf::Iri(ns_.str() + get(name).name); }

rdf::Iri Taxonomy::relation_iri(std::string_view name) const {
  if (!has_relation(name)) throw NotFound("unknown relation '" + std::string(name) + "'");
  return rdf::Iri(ns_.str() + std::string(name));
}

std::optional<std::string> Taxonomy::class_of(const rdf::Iri& iri) const {
  const std::string& s = iri.str();
  if (s.size() <= ns_.str().size() || s.compare(0, ns_.str().size(), ns_.str()) != 0) return std::nullopt;
  std::string_view local = std::string_view(s).substr(ns_.str().size());
  if (!has_class(local)) return std::nullopt;
  return std::string(local);
}

std::optional<std::string> Taxonomy::relation_of(const rdf::Iri& iri) const {
  const std::string& s = iri.str();
  if (s.size() <= ns_.str().size() || s.compare(0, ns_.str().size(), ns_.str()) != 0) return std::nullopt;
  std::string_view local = std::string_view(s).substr(ns_.str().size());
  if (!has_relation(local)) return std::nullopt;
  return std::string(local);
}

Taxonomy parse_taxonomy_json(std::string_view text, const std::string& source) {
  const auto doc = detail::parse_json(text, source);
  const std::string ctx = source.empty() ? "taxonomy" : source;
  rdf::Iri ns(detail::require_string(doc, "namespace", ctx));

  std::vector<BrickClass> classes;
  const auto& jclasses = detail::require_member(doc, "classes", ctx);
  if (!jclasses.is_array()) throw InvalidInput(ctx + ": 'classes' must be an array");
  for (const auto& jc : jclasses) {
    BrickClass c;
    c.name = detail::require_string(jc, "name", ctx);
    if (jc.contains("superclass") && !jc.at("superclass").is_null()) {
      c.superclass = detail::require_string(jc, "superclass", ctx + " class '" + c.name + "'");
    }
    c.kind = kind_from_string(detail::require_string(jc, "kind", ctx + " class '" + c.name + "'"));
    classes.push_back(std::move(c));
  }

  std::vector<RelationDef> relations;
  if (doc.contains("relations")) {
    for (const auto& jr : doc.at("relations")) {
      relations.push_back({detail::require_string(jr, "name", ctx), detail::require_string(jr, "inverse", ctx)});
    }
  }
  return Taxonomy(std::move(ns), std::move(classes), std::move(relations));
}

Taxonomy load_taxonomy(const std::string& path) { return parse_taxonomy_json(detail::read_file(path), path); }

Taxonomy taxonomy_from_graph(const rdf::Graph& graph, const rdf::Iri& ns) {
  const rdf::Iri sub_class_of(std::string(rdf::vocab::rdfs) + "subClassOf");
  const rdf::Iri inverse_of(std::string(rdf::vocab::owl) + "inverseOf");
  const std::string& base = ns.str();
  auto local = [&](const rdf::Iri& iri) -> std::optional<std::string> {
    if (iri.str().size() > base.size() && iri.str().compare(0, base.size(), base) == 0) {
      return iri.str().substr(base.size());
    }
    return std::nullopt;
  };

  std::map<std::string, std::optional<std::string>> parents;
  for (const char* root : {"Point", "Equipment", "Location"}) parents[root];
  for (const auto& t : graph.query(std::nullopt, sub_class_of, std::nullopt)) {
    const auto* obj = std::get_if<rdf::Iri>(&t.object);
    auto child = local(t.subject);
    if (!obj || !child) continue;
    auto parent = local(*obj);
    if (!parent) continue;
    auto [it, inserted] = parents.emplace(*child, *parent);
    if (!inserted && it->second && *it->second != *parent) {
      throw InvalidInput("class '" + *child + "' has more than one superclass");
    }
    if (!inserted && !it->second) it->second = *parent;
    parents.try_emplace(*parent);
  }

  std::function<std::optional<ClassKind>(const std::string&, std::size_t)> kind_of =
      [&](const std::string& name, std::size_t steps) -> std::optional<ClassKind> {
    if (steps > parents.size()) return std::nullopt;
    if (name == "Point") return ClassKind::point;
    if (name == "Equipment") return ClassKind::equipment;
    if (name == "Location") return ClassKind::location;
    const auto& parent = parents.at(name);
    if (!parent) return std::nullopt;
    return kind_of(*parent, steps + 1);
  };

  std::vector<BrickClass> classes;
  for (const auto& [name, parent] : parents) {
    auto kind = kind_of(name, 0);
    if (!kind) throw InvalidInput("class '" + name + "' does not reach Point, Equipment or Location");
    classes.push_back({name, parent, *kind});
  }

  std::vector<RelationDef> relations;
  for (const auto& t : graph.query(std::nullopt, inverse_of, std::nullopt)) {
    const auto* obj = std::get_if<rdf::Iri>(&t.object);
    auto a = local(t.subject);
    if (!obj || !a) continue;
    if (auto b = local(*obj)) relations.push_back({*a, *b});
  }
  return Taxonomy(ns, std::move(classes), std::move(relations));
}

}  // namespace brickgen::ontology
