#include "brickgen/builder.hpp"

#include <algorithm>
#include <cctype>

#include "brickgen/error.hpp"
#include "jsonutil.hpp"

namespace brickgen::build {

using extract::EquipmentRef;
using extract::TokenizedPoint;
using ontology::ClassKind;
using rdf::Graph;
using rdf::Iri;

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string sanitize(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ') {
      out += '_';
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      out += c;
    }
  }
  return out;
}

std::string pair_key(const std::string& source, const std::string& target) { return source + "2" + target; }

Iri brick(std::string_view local) { return Iri(std::string(rdf::vocab::brick) + std::string(local)); }

// Adds (s, r, o) and, when r has a registered inverse, (o, inv, s).
void relate(Graph& g, const ontology::Taxonomy& tax, const Iri& s, std::string_view rel, const Iri& o) {
  g.add(s, tax.relation_iri(rel), o);
  if (tax.has_relation(rel)) g.add(o, tax.relation_iri(tax.relation_inverse(rel)), s);
}

}  // namespace

bool ModuleToggles::pair_enabled(std::string_view key) const {
  auto it = pairs.find(key);
  return it == pairs.end() ? other_pairs : it->second;
}

std::vector<std::string> ModuleToggles::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : pairs) out.push_back(k);
  out.insert(out.end(), {"point_connection", "tagging", "reasoning"});
  return out;
}

void ModuleToggles::set(std::string_view name, bool on) {
  if (name == "point_connection") {
    point_connection = on;
  } else if (name == "tagging") {
    tagging = on;
  } else if (name == "reasoning") {
    reasoning = on;
  } else {
    const auto two = name.find('2');
    if (two == std::string_view::npos || two == 0 || two + 1 == name.size()) {
      throw InvalidInput("unknown module toggle '" + std::string(name) + "'");
    }
    pairs[std::string(name)] = on;
  }
}

bool ModuleToggles::get(std::string_view name) const {
  if (name == "point_connection") return point_connection;
  if (name == "tagging") return tagging;
  if (name == "reasoning") return reasoning;
  return pair_enabled(name);
}

ModuleToggles ModuleToggles::all_on() { return ModuleToggles{}; }

ModuleToggles ModuleToggles::all_off() {
  ModuleToggles t;
  for (auto& [k, v] : t.pairs) v = false;
  t.other_pairs = t.point_connection = t.tagging = t.reasoning = false;
  return t;
}

ModuleToggles ModuleToggles::parse(std::string_view list) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : std::string(list) + ",") {
    if (c == ',') {
      if (!cur.empty()) items.push_back(std::exchange(cur, {}));
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (items.empty() || (items.size() == 1 && items[0] == "all")) return all_on();
  if (items.size() == 1 && items[0] == "none") return all_off();
  const bool subtractive = items.front().front() == '-';
  ModuleToggles t = subtractive ? all_on() : all_off();
  for (const auto& item : items) {
    if ((item.front() == '-') != subtractive) {
      throw InvalidInput("toggle list mixes enabled and '-'disabled entries: " + std::string(list));
    }
    t.set(subtractive ? std::string_view(item).substr(1) : std::string_view(item), !subtractive);
  }
  return t;
}

std::string ModuleToggles::to_string() const {
  std::string out;
  for (const auto& n : names()) {
    if (get(n)) out += (out.empty() ? "" : ",") + n;
  }
  return out.empty() ? "none" : out;
}

rdf::Iri equipment_iri(const EquipmentRef& ref, const BuildConfig& cfg) {
  return Iri(cfg.base.str() + upper(ref.term) + "_" + ref.number);
}

std::vector<EquipmentNode> detect_equipment(const std::vector<TokenizedPoint>& points, const HvacTermRegistry& reg,
                                            const BuildConfig& cfg) {
  std::set<EquipmentRef> seen;
  for (const auto& p : points) {
    for (const auto& e : p.equipment) {
      if (reg.has_term(e.term)) seen.insert(e);
    }
  }
  std::vector<EquipmentNode> out;
  for (const auto& e : seen) out.push_back({e, reg.term(e.term).brick_class, equipment_iri(e, cfg)});
  return out;
}

std::set<std::string> tags_for_class(const ontology::Taxonomy& tax, std::string_view cls) {
  std::set<std::string> tags;
  auto add_parts = [&](const std::string& name) {
    std::string cur;
    for (char c : name + "_") {
      if (c == '_') {
        if (!cur.empty()) tags.insert(std::exchange(cur, {}));
      } else {
        cur += c;
      }
    }
  };
  add_parts(tax.get(cls).name);
  for (const auto& s : tax.superclass_chain(cls)) add_parts(s);
  return tags;
}

rdf::Iri tag_iri(std::string_view tag) { return Iri(std::string(rdf::vocab::tag) + std::string(tag)); }

Graph apply_reasoning(const Graph& graph, const ontology::Taxonomy& tax) {
  Graph out;
  const Iri type = rdf::vocab::type();
  for (const auto& t : graph.triples()) {
    const auto* obj = std::get_if<Iri>(&t.object);
    if (!obj) continue;
    if (t.predicate == type) {
      if (auto cls = tax.class_of(*obj)) {
        for (const auto& s : tax.superclass_chain(*cls)) {
          rdf::Triple inferred{t.subject, type, tax.class_iri(s)};
          if (!graph.contains(inferred)) out.add(inferred);
        }
      }
    } else if (auto rel = tax.relation_of(t.predicate)) {
      rdf::Triple inv{*obj, tax.relation_iri(tax.relation_inverse(*rel)), t.subject};
      if (!graph.contains(inv)) out.add(inv);
    }
  }
  return out;
}

Graph apply_tagging(const Graph& graph, const ontology::Taxonomy& tax) {
  Graph out;
  const Iri has_tag = brick("hasTag");
  for (const auto& t : graph.query(std::nullopt, rdf::vocab::type(), std::nullopt)) {
    const auto* obj = std::get_if<Iri>(&t.object);
    if (!obj) continue;
    auto cls = tax.class_of(*obj);
    if (!cls || tax.get(*cls).kind != ClassKind::point) continue;
    for (const auto& tag : tags_for_class(tax, *cls)) out.add(t.subject, has_tag, tag_iri(tag));
  }
  return out;
}

BuildResult build_model(const std::vector<TokenizedPoint>& points, const std::vector<match::MatchResult>& matches,
                        const HvacTermRegistry& reg, const ontology::Taxonomy& tax, const BuildConfig& cfg,
                        const std::map<std::string, std::string, std::less<>>& timeseries_ids,
                        const std::set<EquipmentRef>& extra_units) {
  const char last = cfg.base.str().back();
  if (last != '#' && last != '/') throw InvalidInput("building base IRI must end in '#' or '/'");
  if (!rdf::is_valid_prefix_name(cfg.prefix)) throw InvalidInput("invalid building prefix '" + cfg.prefix + "'");

  std::map<std::string_view, const match::MatchResult*> match_of;
  for (const auto& m : matches) match_of.emplace(m.code, &m);

  struct Included {
    const TokenizedPoint* point;
    std::string cls;
  };
  std::vector<Included> included;
  for (const auto& p : points) {
    auto it = match_of.find(p.code);
    if (it == match_of.end() || !it->second->best || it->second->excluded) continue;
    if (!tax.has_class(*it->second->best)) {
      throw InvalidInput("point " + p.code + " matched to unknown class '" + *it->second->best + "'");
    }
    included.push_back({&p, *it->second->best});
  }

  BuildResult result;
  std::set<std::string> unknown;
  for (const auto& p : points) {
    for (const auto& t : p.candidate_terms) {
      if (!reg.has_term(t)) unknown.insert(t);
    }
  }
  result.unknown_terms.assign(unknown.begin(), unknown.end());

  std::vector<TokenizedPoint> included_points;
  for (const auto& inc : included) included_points.push_back(*inc.point);
  auto nodes = detect_equipment(included_points, reg, cfg);
  {
    std::set<EquipmentRef> have;
    for (const auto& n : nodes) have.insert(n.ref);
    for (const auto& e : extra_units) {
      if (reg.has_term(e.term) && !have.contains(e)) nodes.push_back({e, reg.term(e.term).brick_class, equipment_iri(e, cfg)});
    }
    std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.ref < b.ref; });
  }

  const Iri type = rdf::vocab::type();
  Graph base;
  std::set<std::string> used;
  for (const auto& n : nodes) {
    base.add(n.iri, type, tax.class_iri(n.brick_class));
    used.insert(n.iri.str());
  }

  // Location nodes from floor/room fragments.
  auto floor_iri = [&](int f) { return Iri(cfg.base.str() + "Floor_" + std::to_string(f)); };
  auto room_iri = [&](int f, const std::string& r) {
    return Iri(cfg.base.str() + "Room_" + std::to_string(f) + "F_" + sanitize(r));
  };
  for (const auto& inc : included) {
    const auto& p = *inc.point;
    if (!p.floor) continue;
    const Iri fl = floor_iri(*p.floor);
    base.add(fl, type, tax.class_iri("Floor"));
    used.insert(fl.str());
    if (p.room) {
      const Iri rm = room_iri(*p.floor, *p.room);
      base.add(rm, type, tax.class_iri("Room"));
      relate(base, tax, fl, "hasPart", rm);
      used.insert(rm.str());
    }
  }

  // Point IRIs in input order; collisions take the code as a suffix.
  for (const auto& inc : included) {
    const auto& p = *inc.point;
    std::string local = sanitize(p.label);
    if (local.empty()) local = "Point_" + sanitize(p.code);
    std::string candidate = local;
    if (used.contains(cfg.base.str() + candidate)) candidate = local + "_" + sanitize(p.code);
    for (int n = 2; used.contains(cfg.base.str() + candidate); ++n) {
      candidate = local + "_" + sanitize(p.code) + "_" + std::to_string(n);
    }
    Iri iri(cfg.base.str() + candidate);
    used.insert(iri.str());
    result.point_iris.emplace(p.code, iri);
    base.add(iri, type, tax.class_iri(inc.cls));
    if (auto ts = timeseries_ids.find(p.code); ts != timeseries_ids.end()) {
      base.add(iri, Iri(std::string(rdf::vocab::ref) + "hasTimeseriesId"), rdf::Literal{ts->second, std::nullopt});
    }
  }

  std::map<std::string, Graph, std::less<>> modules;
  modules.emplace("base", std::move(base));

  // Pair modules: co-occurring units, direction from the registry topology.
  std::map<std::string, Graph, std::less<>> pair_graphs;
  for (const auto& inc : included) {
    const auto& units = inc.point->equipment;
    for (const auto& src : units) {
      for (const auto& tgt : units) {
        if (src == tgt) continue;
        for (const auto& edge : reg.topology()) {
          if (edge.source != src.term || edge.target != tgt.term) continue;
          const std::string key = pair_key(src.term, tgt.term);
          if (!cfg.toggles.pair_enabled(key)) continue;
          relate(pair_graphs[key], tax, equipment_iri(src, cfg), edge.relation, equipment_iri(tgt, cfg));
        }
      }
    }
  }
  for (auto& [k, g] : pair_graphs) modules.emplace(k, std::move(g));

  if (cfg.toggles.point_connection) {
    Graph g;
    for (const auto& inc : included) {
      const auto& p = *inc.point;
      const Iri& iri = result.point_iris.at(p.code);
      const bool location = tax.get(inc.cls).kind == ClassKind::location;
      std::optional<Iri> holder;
      if (!p.equipment.empty() && reg.has_term(p.equipment.back().term)) {
        holder = equipment_iri(p.equipment.back(), cfg);
        relate(g, tax, *holder, location ? "feeds" : "hasPoint", iri);
      } else if (p.floor) {
        holder = p.room ? room_iri(*p.floor, *p.room) : floor_iri(*p.floor);
        relate(g, tax, *holder, location ? "hasPart" : "hasPoint", iri);
      }
    }
    modules.emplace("point_connection", std::move(g));
  }

  if (cfg.toggles.tagging) {
    Graph g;
    const Iri has_tag = brick("hasTag");
    for (const auto& inc : included) {
      if (tax.get(inc.cls).kind != ClassKind::point) continue;
      const Iri& iri = result.point_iris.at(inc.point->code);
      for (const auto& tag : tags_for_class(tax, inc.cls)) g.add(iri, has_tag, tag_iri(tag));
    }
    modules.emplace("tagging", std::move(g));
  }

  Graph composed;
  composed.bind_prefix("brick", Iri(std::string(rdf::vocab::brick)));
  composed.bind_prefix("ref", Iri(std::string(rdf::vocab::ref)));
  composed.bind_prefix(cfg.prefix, cfg.base);
  for (const auto& [name, g] : modules) composed.merge(g);
  if (cfg.toggles.reasoning) {
    Graph inferred = apply_reasoning(composed, tax);
    composed.merge(inferred);
    modules.emplace("reasoning", std::move(inferred));
  }

  result.graph = std::move(composed);
  result.modules = std::move(modules);
  result.nodes = std::move(nodes);
  return result;
}

CompletionResult completion_pass(const std::vector<TokenizedPoint>& points,
                                 const std::vector<match::MatchResult>& matches, const HvacTermRegistry& reg,
                                 const ontology::Taxonomy& tax, const BuildConfig& build_cfg,
                                 const match::MatchConfig& match_cfg,
                                 const std::map<std::string, std::string, std::less<>>& timeseries_ids) {
  CompletionResult out;
  out.matches = matches;
  std::map<std::string_view, const TokenizedPoint*> point_of;
  for (const auto& p : points) point_of.emplace(p.code, &p);

  const match::Score relaxed = match_cfg.threshold / 2;
  for (auto& m : out.matches) {
    auto pit = point_of.find(m.code);
    const bool reserve = pit != point_of.end() && pit->second->reserve;
    if (m.excluded) {
      out.report.excluded.emplace_back(m.code, "operator");
    } else if (m.best) {
      continue;
    } else if (reserve) {
      out.report.excluded.emplace_back(m.code, "reserve");
    } else if (!m.alternates.empty() && m.alternates.front().score >= relaxed) {
      m.best = m.alternates.front().cls;
      m.score = m.alternates.front().score;
      m.alternates.erase(m.alternates.begin());
      m.status = match::MatchStatus::automatic;
      m.relaxed = true;
      out.report.rematched.emplace_back(m.code, *m.best);
    } else {
      out.report.excluded.emplace_back(m.code, "no match");
    }
  }

  std::set<EquipmentRef> included_units, all_units;
  std::map<std::string_view, const match::MatchResult*> match_of;
  for (const auto& m : out.matches) match_of.emplace(m.code, &m);
  for (const auto& p : points) {
    auto it = match_of.find(p.code);
    const bool inc = it != match_of.end() && it->second->best && !it->second->excluded;
    for (const auto& e : p.equipment) {
      if (!reg.has_term(e.term)) continue;
      all_units.insert(e);
      if (inc) included_units.insert(e);
    }
  }
  std::set<EquipmentRef> extra;
  for (const auto& e : all_units) {
    if (!included_units.contains(e)) {
      extra.insert(e);
      out.report.created_nodes.push_back(e);
    }
  }
  out.build = build_model(points, out.matches, reg, tax, build_cfg, timeseries_ids, extra);
  return out;
}

std::string completion_report_to_json(const CompletionReport& report) {
  detail::json doc;
  doc["created_nodes"] = detail::json::array();
  for (const auto& e : report.created_nodes) doc["created_nodes"].push_back(upper(e.term) + "_" + e.number);
  doc["rematched"] = detail::json::array();
  for (const auto& [code, cls] : report.rematched) doc["rematched"].push_back({{"code", code}, {"class", cls}});
  doc["excluded"] = detail::json::array();
  for (const auto& [code, reason] : report.excluded) doc["excluded"].push_back({{"code", code}, {"reason", reason}});
  return detail::dump_pretty(doc);
}

}  // namespace brickgen::build
