#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "brickgen/error.hpp"
#include "brickgen/extract.hpp"
#include "brickgen/match.hpp"
#include "brickgen/pipeline.hpp"
#include "brickgen/store.hpp"
#include "brickgen/turtle.hpp"
#include "brickgen/validator.hpp"

namespace py = pybind11;
using namespace brickgen;

namespace {

// Shipped lookup tables, loaded once per data directory.
struct Toolkit {
  extract::Dictionary dict;
  extract::AbbreviationTable abbrevs;
  HvacTermRegistry registry;
  ontology::Taxonomy tax;
  match::MatchConfig cfg;

  explicit Toolkit(const std::string& dir)
      : dict(extract::load_dictionary(dir + "/dictionary.json")),
        abbrevs(extract::load_abbreviations(dir + "/abbreviations.json")),
        registry(load_registry(dir + "/registry.json")),
        tax(ontology::load_taxonomy(dir + "/taxonomy/brick_subset.json")) {}

  extract::TokenizedPoint tokenize(const std::string& label, const std::string& code) const {
    return extract::tokenize_point({code, label, std::nullopt, {}, 0}, dict, abbrevs, registry);
  }
};

py::tuple score_tuple(const match::Score& s) { return py::make_tuple(s.numerator(), s.denominator()); }

py::dict token_dict(const extract::TokenizedPoint& tp) {
  py::dict d;
  d["code"] = tp.code;
  d["label"] = tp.label;
  d["tokens"] = tp.tokens;
  d["floor"] = tp.floor;
  d["room"] = tp.room;
  py::list eq;
  for (const auto& e : tp.equipment) eq.append(py::make_tuple(e.term, e.number));
  d["equipment"] = eq;
  d["reserve"] = tp.reserve;
  d["candidate_terms"] = tp.candidate_terms;
  d["untranslated"] = tp.untranslated;
  return d;
}

py::dict match_dict(const match::MatchResult& r) {
  py::dict d;
  d["code"] = r.code;
  d["label"] = r.label;
  d["best"] = r.best;
  d["display"] = match::display_class(r);
  d["score"] = score_tuple(r.score);
  d["status"] = std::string(match::to_string(r.status));
  py::list alts;
  for (const auto& a : r.alternates) alts.append(py::make_tuple(a.cls, score_tuple(a.score)));
  d["alternates"] = alts;
  return d;
}

py::list summaries(const std::vector<StageResult>& rs) {
  py::list out;
  for (const auto& r : rs) out.append(py::make_tuple(std::string(to_string(r.stage)), r.summary, r.failed));
  return out;
}

py::tuple summary(const StageResult& r) { return py::make_tuple(std::string(to_string(r.stage)), r.summary, r.failed); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of brickgen";

  // translators run newest first, so subclasses go after Error
  auto& error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<InvalidInput>(m, "InvalidInput", error.ptr());
  py::register_exception<ConflictError>(m, "ConflictError", error.ptr());
  py::register_exception<NotFound>(m, "NotFound", error.ptr());
  static py::handle missing = py::register_exception<MissingPrerequisite>(m, "MissingPrerequisite", error.ptr()).ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const MissingPrerequisite& e) {
      py::object exc = py::reinterpret_borrow<py::object>(missing)(e.what());
      exc.attr("stage") = e.stage();
      PyErr_SetObject(missing.ptr(), exc.ptr());
    }
  });

  m.def("data_dir", &store::data_dir);
  m.def("timeseries_id", [](const std::string& ns, const std::string& code) { return store::timeseries_id(ns, code); });
  m.def(
      "jaccard",
      [](const std::set<std::string>& a, const std::set<std::string>& b) {
        return score_tuple(match::jaccard(match::TokenSet(a.begin(), a.end()), match::TokenSet(b.begin(), b.end())));
      },
      "(numerator, denominator) of |a & b| / |a | b|");

  py::class_<Toolkit>(m, "Toolkit")
      .def(py::init<const std::string&>(), py::arg("data_dir"))
      .def("tokenize", [](const Toolkit& t, const std::string& label,
                          const std::string& code) { return token_dict(t.tokenize(label, code)); },
           py::arg("label"), py::arg("code") = "")
      .def("match", [](const Toolkit& t, const std::string& label,
                       const std::string& code) { return match_dict(match::match_point(t.tokenize(label, code), t.tax, t.cfg)); },
           py::arg("label"), py::arg("code") = "")
      .def("superclass_chain", [](const Toolkit& t, const std::string& cls) { return t.tax.superclass_chain(cls); })
      .def("has_class", [](const Toolkit& t, const std::string& cls) { return t.tax.has_class(cls); })
      .def(
          "validate",
          [](const Toolkit& t, const std::string& model_text, const std::string& templates_path) {
            const auto lib = validation::load_templates(templates_path, t.tax);
            return validation::report_to_json(validation::validate(rdf::parse_turtle(model_text), lib, t.tax));
          },
          py::arg("model_turtle"), py::arg("templates_path"));

  m.def(
      "parse_turtle",
      [](const std::string& text) {
        const auto g = rdf::parse_turtle(text);
        py::list out;
        for (const auto& t : g.triples()) {
          if (const auto* iri = std::get_if<rdf::Iri>(&t.object)) {
            out.append(py::make_tuple(t.subject.str(), t.predicate.str(), iri->str(), py::none()));
          } else {
            const auto& lit = std::get<rdf::Literal>(t.object);
            out.append(py::make_tuple(t.subject.str(), t.predicate.str(), lit.lexical,
                                      lit.datatype ? py::object(py::str(lit.datatype->str())) : py::object(py::str(""))));
          }
        }
        py::dict prefixes;
        for (const auto& [k, v] : g.prefixes()) prefixes[py::str(k)] = v.str();
        return py::make_tuple(out, prefixes);
      },
      "(triples, prefixes); literal objects carry a datatype string ('' for plain), IRIs carry None");
  m.def("canonical_turtle", [](const std::string& text) { return rdf::serialize_turtle(rdf::parse_turtle(text)); });

  py::class_<Pipeline>(m, "Pipeline")
      .def_static(
          "init",
          [](const std::filesystem::path& dir, const std::string& id, const std::string& prefix, const std::string& base,
             const std::string& registry, const std::string& threshold, const std::string& toggles,
             const std::string& templates) {
            auto cfg = store::default_config(id);
            if (!prefix.empty()) cfg.build.prefix = prefix;
            if (!base.empty()) cfg.build.base = rdf::Iri(base);
            if (!threshold.empty()) cfg.match.threshold = match::parse_score(threshold);
            if (!toggles.empty()) cfg.build.toggles = build::ModuleToggles::parse(toggles);
            if (!templates.empty()) cfg.templates = templates;
            return Pipeline::init(dir, cfg, registry);
          },
          py::arg("dir"), py::arg("id"), py::arg("prefix") = "", py::arg("base") = "", py::arg("registry") = "",
          py::arg("threshold") = "", py::arg("toggles") = "", py::arg("templates") = "")
      .def_static("open", &Pipeline::open, py::arg("dir"))
      .def_property_readonly("dir", [](const Pipeline& p) { return p.project().dir(); })
      .def("config_json", [](const Pipeline& p) { return store::config_to_json(p.project().config()); })
      .def("has", [](const Pipeline& p, const std::string& name) { return p.project().has(name); })
      .def("read", [](const Pipeline& p, const std::string& name) { return p.project().read(name); })
      .def(
          "ingest",
          [](Pipeline& p, const std::string& path, const std::string& ts) { return summary(p.ingest(path, ts)); },
          py::arg("pointlist"), py::arg("timeseries") = "", py::call_guard<py::gil_scoped_release>())
      .def("translate", [](Pipeline& p) { return summary(p.translate()); })
      .def("tokenize", [](Pipeline& p) { return summary(p.tokenize()); })
      .def("match", [](Pipeline& p) { return summary(p.match()); })
      .def("layout", [](Pipeline& p) { return summary(p.layout()); })
      .def("graph", [](Pipeline& p) { return summary(p.graph()); })
      .def(
          "validate", [](Pipeline& p, const std::string& templates) { return summary(p.validate(templates)); },
          py::arg("templates") = "")
      .def("report", [](Pipeline& p) { return summary(p.report()); })
      .def(
          "run_all",
          [](Pipeline& p, const std::string& path, const std::string& ts, const std::string& templates) {
            std::vector<StageResult> rs;
            {
              py::gil_scoped_release release;
              rs = p.run_all(path, ts, std::nullopt, templates);
            }
            return summaries(rs);
          },
          py::arg("pointlist"), py::arg("timeseries") = "", py::arg("templates") = "")
      .def("refresh", [](Pipeline& p) { return summaries(p.refresh()); })
      .def("rebuild", [](Pipeline& p) { return summaries(p.rebuild()); })
      .def("matches", [](const Pipeline& p) {
        py::list out;
        for (const auto& r : p.matches()) out.append(match_dict(r));
        return out;
      })
      .def("stats", [](const Pipeline& p) {
        const auto s = p.stats();
        py::dict d;
        d["total"] = s.total;
        d["matched"] = s.matched;
        d["nomatch"] = s.nomatch;
        d["match_rate"] = s.match_rate;
        return d;
      })
      .def(
          "override_match",
          [](Pipeline& p, const std::string& code, const std::optional<std::string>& cls, const std::string& note) {
            return match_dict(p.override_match(code, cls, note));
          },
          py::arg("code"), py::arg("cls"), py::arg("note") = "")
      .def("prefixes", [](const Pipeline& p) {
        py::list out;
        for (const auto& c : p.prefixes()) out.append(py::make_tuple(c.term, c.count, c.registered));
        return out;
      })
      .def("timeseries", [](const Pipeline& p, const std::string& id, const std::string& from, const std::string& to) {
        py::list out;
        for (const auto& s : p.project().get_timeseries(id, from, to)) out.append(py::make_tuple(s.timestamp, s.value));
        return out;
      });
}
