#include "brickgen/validator.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "brickgen/error.hpp"
#include "fsutil.hpp"
#include "jsonutil.hpp"

namespace brickgen::validation {

using detail::json;

namespace {

// YAML scalars stay strings; templates carry no numbers or booleans.
json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return node.Scalar();
    case YAML::NodeType::Sequence: {
      json out = json::array();
      for (const auto& item : node) out.push_back(yaml_to_json(item));
      return out;
    }
    case YAML::NodeType::Map: {
      json out = json::object();
      for (const auto& kv : node) out[kv.first.Scalar()] = yaml_to_json(kv.second);
      return out;
    }
  }
  return nullptr;
}

Template template_from_json(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw InvalidInput(ctx + ": template must be an object");
  Template t;
  t.name = detail::require_string(j, "name", ctx);
  const std::string tctx = ctx + ": template '" + t.name + "'";
  t.target_class = detail::require_string(j, "target_class", tctx);
  if (j.contains("required_points") && !j.at("required_points").is_null()) {
    const auto& rp = j.at("required_points");
    if (!rp.is_array()) throw InvalidInput(tctx + ": required_points must be a list");
    for (const auto& p : rp) {
      if (!p.is_object()) throw InvalidInput(tctx + ": required point must be an object");
      t.required_points.push_back({detail::require_string(p, "role", tctx), detail::require_string(p, "class", tctx)});
    }
  }
  if (j.contains("dependencies") && !j.at("dependencies").is_null()) {
    const auto& deps = j.at("dependencies");
    if (!deps.is_array()) throw InvalidInput(tctx + ": dependencies must be a list");
    for (const auto& d : deps) {
      // bare name, or {template: name}
      if (d.is_string()) {
        t.dependencies.push_back(d.get<std::string>());
      } else if (d.is_object()) {
        t.dependencies.push_back(detail::require_string(d, "template", tctx));
      } else {
        throw InvalidInput(tctx + ": dependency must be a name");
      }
    }
  }
  return t;
}

bool is_point_object(const rdf::Graph& g, const rdf::Term& obj, const std::string& cls,
                     const ontology::Taxonomy& tax) {
  const auto* iri = std::get_if<rdf::Iri>(&obj);
  if (!iri) return false;
  for (const auto& t : g.objects(*iri, rdf::vocab::type())) {
    const auto* type_iri = std::get_if<rdf::Iri>(&t);
    if (!type_iri) continue;
    auto name = tax.class_of(*type_iri);
    if (name && tax.is_subclass_of(*name, cls)) return true;
  }
  return false;
}

}  // namespace

TemplateLibrary::TemplateLibrary(std::vector<Template> templates, const ontology::Taxonomy& tax)
    : templates_(std::move(templates)) {
  std::map<std::string_view, const Template*> by_name;
  for (const auto& t : templates_) {
    if (t.name.empty()) throw InvalidInput("template with empty name");
    if (!by_name.emplace(t.name, &t).second) throw InvalidInput("duplicate template name '" + t.name + "'");
    if (!tax.has_class(t.target_class)) {
      throw InvalidInput("template '" + t.name + "': unknown class '" + t.target_class + "'");
    }
    for (const auto& p : t.required_points) {
      if (!tax.has_class(p.cls)) throw InvalidInput("template '" + t.name + "': unknown class '" + p.cls + "'");
    }
  }
  for (const auto& t : templates_) {
    for (const auto& d : t.dependencies) {
      if (!by_name.contains(d)) throw InvalidInput("template '" + t.name + "': unknown dependency '" + d + "'");
    }
  }
  // 0 unvisited, 1 on stack, 2 done
  std::map<std::string_view, int> state;
  std::function<void(const Template&)> visit = [&](const Template& t) {
    state[t.name] = 1;
    for (const auto& d : t.dependencies) {
      if (state[d] == 1) throw InvalidInput("template dependency cycle through '" + d + "'");
      if (state[d] == 0) visit(*by_name.at(d));
    }
    state[t.name] = 2;
  };
  for (const auto& t : templates_) {
    if (state[t.name] == 0) visit(t);
  }
}

const Template& TemplateLibrary::get(std::string_view name) const {
  for (const auto& t : templates_) {
    if (t.name == name) return t;
  }
  throw NotFound("no template named '" + std::string(name) + "'");
}

std::vector<RequiredPoint> TemplateLibrary::requirements(std::string_view name) const {
  std::vector<RequiredPoint> out;
  std::set<std::string_view> seen;
  std::function<void(const Template&)> collect = [&](const Template& t) {
    if (!seen.insert(t.name).second) return;
    out.insert(out.end(), t.required_points.begin(), t.required_points.end());
    for (const auto& d : t.dependencies) collect(get(d));
  };
  collect(get(name));
  return out;
}

std::vector<std::string> TemplateLibrary::top_level() const {
  std::set<std::string_view> deps;
  for (const auto& t : templates_) deps.insert(t.dependencies.begin(), t.dependencies.end());
  std::vector<std::string> out;
  for (const auto& t : templates_) {
    if (!deps.contains(t.name)) out.push_back(t.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Template> parse_templates(std::string_view text, bool yaml, const std::string& source) {
  const std::string ctx = source.empty() ? "templates" : source;
  json doc;
  if (yaml) {
    try {
      doc = yaml_to_json(YAML::Load(std::string(text)));
    } catch (const YAML::ParserException& e) {
      throw ParseError(ctx, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
  } else {
    const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    doc = blank ? json(nullptr) : detail::parse_json(text, ctx);
  }
  if (doc.is_null()) return {};
  if (doc.is_object() && doc.contains("templates")) doc = doc.at("templates");
  if (doc.is_null()) return {};
  if (doc.is_object()) return {template_from_json(doc, ctx)};
  if (!doc.is_array()) throw InvalidInput(ctx + ": expected a template or a list of templates");
  std::vector<Template> out;
  for (const auto& j : doc) out.push_back(template_from_json(j, ctx));
  return out;
}

TemplateLibrary load_templates(const std::string& path, const ontology::Taxonomy& tax) {
  const auto ext = std::filesystem::path(path).extension().string();
  return TemplateLibrary(parse_templates(detail::read_file(path), ext == ".yaml" || ext == ".yml", path), tax);
}

ValidationReport validate(const rdf::Graph& graph, const TemplateLibrary& templates, const ontology::Taxonomy& tax) {
  ValidationReport report;
  const auto tops = templates.top_level();
  if (tops.empty()) return report;

  // subject -> chosen template
  std::map<std::string, std::pair<std::string, std::size_t>> chosen;
  std::map<std::string, rdf::Iri> subjects;
  for (const auto& t : graph.query(std::nullopt, rdf::vocab::type(), std::nullopt)) {
    const auto* type_iri = std::get_if<rdf::Iri>(&t.object);
    if (!type_iri) continue;
    auto cls = tax.class_of(*type_iri);
    if (!cls) continue;
    for (const auto& name : tops) {
      const auto& target = templates.get(name).target_class;
      if (!tax.is_subclass_of(*cls, target)) continue;
      const std::size_t depth = tax.depth(target);
      auto [it, fresh] = chosen.try_emplace(t.subject.str(), name, depth);
      if (!fresh && (depth > it->second.second || (depth == it->second.second && name < it->second.first))) {
        it->second = {name, depth};
      }
      subjects.emplace(t.subject.str(), t.subject);
    }
  }

  std::vector<std::pair<std::string, std::string>> work(chosen.size());
  std::transform(chosen.begin(), chosen.end(), work.begin(), [](const auto& kv) {
    return std::pair{kv.first, kv.second.first};
  });
  report.results.resize(work.size());
  const rdf::Iri has_point(std::string(rdf::vocab::brick) + "hasPoint");

  auto check = [&](std::size_t i) {
    const auto& [subject, name] = work[i];
    InstanceResult r{subject, name, Status::pass, {}};
    const auto points = graph.objects(subjects.at(subject), has_point);
    for (const auto& req : templates.requirements(name)) {
      if (std::find(r.missing.begin(), r.missing.end(), req.cls) != r.missing.end()) continue;
      const bool met = std::any_of(points.begin(), points.end(),
                                   [&](const rdf::Term& o) { return is_point_object(graph, o, req.cls, tax); });
      if (!met) r.missing.push_back(req.cls);
    }
    if (!r.missing.empty()) r.status = Status::fail;
    report.results[i] = std::move(r);
  };

  const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  if (work.size() < 64 || workers == 1) {
    for (std::size_t i = 0; i < work.size(); ++i) check(i);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < work.size(); i += workers) check(i);
      }));
    }
    for (auto& j : jobs) j.get();
  }
  for (const auto& r : report.results) (r.status == Status::pass ? report.passed : report.failed)++;
  return report;
}

std::string report_to_json(const ValidationReport& report) {
  json results = json::array();
  for (const auto& r : report.results) {
    results.push_back({{"equipment", r.equipment},
                       {"template", r.template_name},
                       {"status", r.status == Status::pass ? "pass" : "fail"},
                       {"missing", r.missing}});
  }
  json doc = {{"results", results},
              {"summary",
               {{"instances", report.results.size()}, {"passed", report.passed}, {"failed", report.failed}}}};
  return detail::dump_pretty(doc);
}

ValidationReport report_from_json(std::string_view text, const std::string& source) {
  const std::string ctx = source.empty() ? "validation report" : source;
  const auto doc = detail::parse_json(text, ctx);
  ValidationReport out;
  try {
    for (const auto& j : detail::require_member(doc, "results", ctx)) {
      InstanceResult r;
      r.equipment = detail::require_string(j, "equipment", ctx);
      r.template_name = detail::require_string(j, "template", ctx);
      const auto status = detail::require_string(j, "status", ctx);
      if (status != "pass" && status != "fail") throw InvalidInput(ctx + ": bad status '" + status + "'");
      r.status = status == "pass" ? Status::pass : Status::fail;
      r.missing = j.value("missing", std::vector<std::string>{});
      (r.status == Status::pass ? out.passed : out.failed)++;
      out.results.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(ctx + ": " + e.what());
  }
  return out;
}

std::string report_to_table(const ValidationReport& report) {
  std::size_t w_eq = 9, w_tpl = 8;
  for (const auto& r : report.results) {
    w_eq = std::max(w_eq, r.equipment.size());
    w_tpl = std::max(w_tpl, r.template_name.size());
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  std::string out = pad("equipment", w_eq) + "  " + pad("template", w_tpl) + "  status  missing\n";
  for (const auto& r : report.results) {
    std::string missing;
    for (const auto& m : r.missing) missing += (missing.empty() ? "" : ", ") + m;
    out += pad(r.equipment, w_eq) + "  " + pad(r.template_name, w_tpl) + "  " +
           (r.status == Status::pass ? "pass  " : "FAIL  ") + "  " + (missing.empty() ? "-" : missing) + "\n";
  }
  out += std::to_string(report.results.size()) + " instances, " + std::to_string(report.passed) + " passed, " +
         std::to_string(report.failed) + " failed\n";
  return out;
}

}  // namespace brickgen::validation
