#include "brickgen/pipeline.hpp"

#include <map>

#include "brickgen/error.hpp"
#include "brickgen/turtle.hpp"
#include "fsutil.hpp"
#include "jsonutil.hpp"

namespace brickgen {

namespace art = store::artifact;
using detail::json;

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::ingest: return "ingest";
    case Stage::translate: return "translate";
    case Stage::tokenize: return "tokenize";
    case Stage::match: return "match";
    case Stage::layout: return "layout";
    case Stage::graph: return "graph";
    case Stage::validate: return "validate";
    case Stage::report: return "report";
  }
  return "?";
}

namespace {

std::optional<Stage> parent(Stage s) {
  switch (s) {
    case Stage::ingest: return std::nullopt;
    case Stage::translate: return Stage::ingest;
    case Stage::tokenize: return Stage::translate;
    case Stage::match:
    case Stage::layout: return Stage::tokenize;
    case Stage::graph:
    case Stage::report: return Stage::match;
    case Stage::validate: return Stage::graph;
  }
  return std::nullopt;
}

std::string_view output_of(Stage s) {
  switch (s) {
    case Stage::ingest: return art::pointlist;
    case Stage::translate: return art::translated;
    case Stage::tokenize: return art::tokens;
    case Stage::match: return art::matches;
    case Stage::layout: return art::layout;
    case Stage::graph: return art::model;
    case Stage::validate: return art::validation;
    case Stage::report: return art::summary;
  }
  return {};
}

std::string percent(double rate) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f%%", rate * 100.0);
  return buf;
}

}  // namespace

struct Pipeline::Resources {
  extract::Dictionary dict;
  extract::AbbreviationTable abbrevs;
  ontology::Taxonomy tax;
};

Pipeline::Pipeline(store::Project project) : project_(std::move(project)) {}

Pipeline Pipeline::init(const std::filesystem::path& dir, store::ProjectConfig cfg, const std::string& registry_path) {
  // load everything the config names before touching the directory
  auto tax = ontology::load_taxonomy(cfg.taxonomy);
  extract::load_dictionary(cfg.dictionary);
  extract::load_abbreviations(cfg.abbreviations);
  if (!cfg.templates.empty()) validation::load_templates(cfg.templates, tax);
  const auto reg = load_registry(registry_path.empty() ? store::data_dir() + "/registry.json" : registry_path);
  reg.validate(tax);
  if (std::filesystem::exists(dir / std::string(art::config))) {
    throw ConflictError("project already exists at '" + dir.string() + "'");
  }
  std::filesystem::create_directories(dir);
  store::WriterLock lock(dir);
  auto project = store::Project::create(dir, std::move(cfg));
  project.write(art::registry, registry_to_json(reg));
  return Pipeline(std::move(project));
}

void Pipeline::update_config(const store::ProjectConfig& cfg) {
  store::WriterLock lock(project_.dir());
  project_.set_config(cfg);
  res_.reset();
}

Pipeline::Resources& Pipeline::res() const {
  if (!res_) {
    const auto& c = project_.config();
    res_ = std::make_shared<Resources>(Resources{extract::load_dictionary(c.dictionary),
                                                 extract::load_abbreviations(c.abbreviations),
                                                 ontology::load_taxonomy(c.taxonomy)});
  }
  return *res_;
}

const ontology::Taxonomy& Pipeline::taxonomy() const { return res().tax; }

void Pipeline::require(Stage stage) const {
  std::vector<Stage> chain;
  for (auto p = parent(stage); p; p = parent(*p)) chain.push_back(*p);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    if (!project_.has(output_of(*it))) throw MissingPrerequisite(std::string(to_string(*it)));
  }
}

ingest::PointList Pipeline::stored_points() const {
  return ingest::parse_pointlist(project_.path(art::pointlist).string(), ingest::PointFormat::csv);
}

std::vector<extract::TokenizedPoint> Pipeline::stored_tokens() const {
  return extract::tokens_from_json(project_.read(art::tokens), project_.path(art::tokens).string());
}

HvacTermRegistry Pipeline::registry() const {
  if (!project_.has(art::registry)) return load_registry(store::data_dir() + "/registry.json");
  return load_registry(project_.path(art::registry).string());
}

StageResult Pipeline::do_ingest(const ingest::PointList& points, const std::vector<ingest::TimeseriesSample>* samples) {
  store::TimeseriesIndex index;
  for (const auto& p : points.points) index.assign(project_.config().ts_namespace, p.code);
  std::size_t orphans = 0;
  std::string ts_csv;
  if (samples) {
    const auto orphan = ingest::orphan_samples(*samples, points);
    orphans = orphan.size();
    ts_csv = ingest::write_timeseries_csv(*samples);
    json rep = json::array();
    for (const auto& s : orphan) rep.push_back({{"code", s.code}, {"timestamp", s.timestamp}, {"line", s.line}});
    project_.write("reports/orphan_samples.json", detail::dump_pretty(rep));
  }
  // downstream artifacts describe the previous point list
  for (auto name : {art::translated, art::tokens, art::matches, art::stats, art::layout, art::model, art::completion,
                    art::validation, art::validation_table, art::summary}) {
    project_.remove(name);
  }
  project_.write(art::pointlist, ingest::write_pointlist_csv(points));
  project_.write(art::ts_index, index.to_json());
  StageResult r{Stage::ingest, {}, {project_.path(art::pointlist), project_.path(art::ts_index)}};
  if (samples) {
    project_.write(art::timeseries, ts_csv);
    r.artifacts.push_back(project_.path(art::timeseries));
  } else {
    project_.remove(art::timeseries);
  }
  r.summary = "ingest: " + std::to_string(points.points.size()) + " points";
  if (samples) {
    r.summary += ", " + std::to_string(samples->size()) + " samples (" + std::to_string(orphans) + " orphan)";
  }
  return r;
}

StageResult Pipeline::ingest(const std::string& pointlist_path, const std::string& timeseries_path,
                             std::optional<ingest::PointFormat> format) {
  const auto points =
      ingest::parse_pointlist(pointlist_path, format.value_or(ingest::format_for_path(pointlist_path)));
  std::optional<std::vector<ingest::TimeseriesSample>> samples;
  if (!timeseries_path.empty()) samples = ingest::parse_timeseries(timeseries_path);
  store::WriterLock lock(project_.dir());
  return do_ingest(points, samples ? &*samples : nullptr);
}

StageResult Pipeline::ingest_text(std::string_view pointlist, ingest::PointFormat format, std::string_view timeseries) {
  const auto points = ingest::parse_pointlist_text(pointlist, format, "pointlist");
  std::optional<std::vector<ingest::TimeseriesSample>> samples;
  if (!timeseries.empty()) samples = ingest::parse_timeseries_text(timeseries, "timeseries");
  store::WriterLock lock(project_.dir());
  return do_ingest(points, samples ? &*samples : nullptr);
}

StageResult Pipeline::do_translate() {
  require(Stage::translate);
  const auto points = stored_points();
  std::vector<extract::Translation> ts;
  std::set<std::string> untranslated;
  for (const auto& p : points.points) {
    ts.push_back(extract::translate_label(p.name, res().dict));
    untranslated.insert(ts.back().untranslated.begin(), ts.back().untranslated.end());
  }
  project_.write(art::translated, extract::translations_to_json(points.points, ts));
  return {Stage::translate,
          "translate: " + std::to_string(ts.size()) + " labels, " + std::to_string(untranslated.size()) +
              " untranslated fragments",
          {project_.path(art::translated)}};
}

StageResult Pipeline::do_tokenize() {
  require(Stage::tokenize);
  const auto points = stored_points();
  const auto reg = registry();
  std::vector<extract::TokenizedPoint> out;
  std::size_t reserve = 0;
  for (const auto& p : points.points) {
    out.push_back(extract::tokenize_point(p, res().dict, res().abbrevs, reg));
    reserve += out.back().reserve ? 1 : 0;
  }
  project_.write(art::tokens, extract::tokens_to_json(out));
  return {Stage::tokenize,
          "tokenize: " + std::to_string(out.size()) + " points, " + std::to_string(reserve) + " reserve",
          {project_.path(art::tokens)}};
}

StageResult Pipeline::do_match() {
  require(Stage::match);
  const auto tokens = stored_tokens();
  auto [results, stats] = match::match_corpus(tokens, res().tax, project_.config().match);
  const auto decisions = project_.decisions().replay();
  match::apply_decisions(results, tokens, decisions, res().tax);
  stats = match::compute_stats(results);
  project_.write(art::matches, match::matches_to_json(results));
  project_.write(art::stats, match::stats_to_json(stats));
  return {Stage::match,
          "match: " + std::to_string(stats.matched) + "/" + std::to_string(stats.total) + " matched (" +
              percent(stats.match_rate) + "), " + std::to_string(decisions.size()) + " operator decisions",
          {project_.path(art::matches), project_.path(art::stats)}};
}

StageResult Pipeline::do_layout() {
  require(Stage::layout);
  const auto layout = extract::build_semi_layout(stored_tokens());
  project_.write(art::layout, extract::layout_to_json(layout));
  std::size_t rooms = 0;
  for (const auto& f : layout.floors) rooms += f.rooms.size();
  return {Stage::layout,
          "layout: " + std::to_string(layout.floors.size()) + " floors, " + std::to_string(rooms) + " rooms",
          {project_.path(art::layout)}};
}

StageResult Pipeline::do_graph() {
  require(Stage::graph);
  const auto tokens = stored_tokens();
  const auto matches = match::matches_from_json(project_.read(art::matches), project_.path(art::matches).string());
  const auto reg = registry();
  reg.validate(res().tax);
  std::map<std::string, std::string, std::less<>> ts_ids;
  const auto index = project_.index();
  for (const auto& [code, id] : index.by_code()) ts_ids.emplace(code, id);
  auto out = build::completion_pass(tokens, matches, reg, res().tax, project_.config().build,
                                    project_.config().match, ts_ids);
  project_.write(art::model, rdf::serialize_turtle(out.build.graph));
  project_.write(art::completion, build::completion_report_to_json(out.report));
  return {Stage::graph,
          "graph: " + std::to_string(out.build.graph.size()) + " triples, " +
              std::to_string(out.build.point_iris.size()) + " points, " + std::to_string(out.build.nodes.size()) +
              " equipment, " + std::to_string(out.report.excluded.size()) + " excluded",
          {project_.path(art::model), project_.path(art::completion)}};
}

StageResult Pipeline::do_validate(const std::string& templates_path) {
  require(Stage::validate);
  if (!project_.has(art::model)) throw MissingPrerequisite("graph");
  const std::string path = templates_path.empty() ? project_.config().templates : templates_path;
  if (path.empty()) throw InvalidInput("no validation templates configured (use --templates)");
  const auto templates = validation::load_templates(path, res().tax);
  const auto graph = rdf::read_turtle_file(project_.path(art::model).string());
  const auto report = validation::validate(graph, templates, res().tax);
  project_.write(art::validation, validation::report_to_json(report));
  project_.write(art::validation_table, validation::report_to_table(report));
  StageResult r{Stage::validate,
                "validate: " + std::to_string(report.results.size()) + " instances, " +
                    std::to_string(report.passed) + " passed, " + std::to_string(report.failed) + " failed",
                {project_.path(art::validation), project_.path(art::validation_table)}};
  r.failed = !report.ok();
  return r;
}

StageResult Pipeline::do_report() {
  require(Stage::report);
  json doc;
  doc["project"] = project_.config().id;
  doc["stats"] = json::parse(project_.read(art::stats));
  if (project_.has(art::layout)) {
    doc["floors"] = json::parse(project_.read(art::layout)).at("floors").size();
  }
  if (project_.has(art::completion)) doc["completion"] = json::parse(project_.read(art::completion));
  if (project_.has(art::model)) {
    const auto g = rdf::read_turtle_file(project_.path(art::model).string());
    std::map<std::string, std::size_t> by_predicate;
    for (const auto& t : g.triples()) ++by_predicate[t.predicate.str()];
    doc["triples"] = g.size();
    doc["triples_by_predicate"] = by_predicate;
  }
  if (project_.has(art::validation)) doc["validation"] = json::parse(project_.read(art::validation)).at("summary");
  doc["timeseries_id_scheme"] = "sha256(namespace 0x00 code), first 128 bits, decimal";
  project_.write(art::summary, detail::dump_pretty(doc));
  const auto& s = doc["stats"];
  return {Stage::report,
          "report: " + std::to_string(s.value("matched", 0)) + "/" + std::to_string(s.value("total", 0)) +
              " matched" + (doc.contains("triples") ? ", " + std::to_string(doc["triples"].get<std::size_t>()) + " triples" : ""),
          {project_.path(art::summary)}};
}

StageResult Pipeline::translate() {
  store::WriterLock lock(project_.dir());
  return do_translate();
}
StageResult Pipeline::tokenize() {
  store::WriterLock lock(project_.dir());
  return do_tokenize();
}
StageResult Pipeline::match() {
  store::WriterLock lock(project_.dir());
  return do_match();
}
StageResult Pipeline::layout() {
  store::WriterLock lock(project_.dir());
  return do_layout();
}
StageResult Pipeline::graph() {
  store::WriterLock lock(project_.dir());
  return do_graph();
}
StageResult Pipeline::validate(const std::string& templates_path) {
  store::WriterLock lock(project_.dir());
  return do_validate(templates_path);
}
StageResult Pipeline::report() {
  store::WriterLock lock(project_.dir());
  return do_report();
}

std::vector<StageResult> Pipeline::do_refresh() {
  return {do_translate(), do_tokenize(), do_match(), do_layout()};
}

std::vector<StageResult> Pipeline::refresh() {
  store::WriterLock lock(project_.dir());
  return do_refresh();
}

std::vector<StageResult> Pipeline::rebuild() {
  store::WriterLock lock(project_.dir());
  auto out = do_refresh();
  out.push_back(do_graph());
  return out;
}

std::vector<StageResult> Pipeline::run_all(const std::string& pointlist_path, const std::string& timeseries_path,
                                           std::optional<ingest::PointFormat> format,
                                           const std::string& templates_path) {
  std::vector<StageResult> out;
  if (!pointlist_path.empty()) {
    out.push_back(ingest(pointlist_path, timeseries_path, format));
  }
  store::WriterLock lock(project_.dir());
  for (auto& r : do_refresh()) out.push_back(std::move(r));
  out.push_back(do_graph());
  if (!templates_path.empty() || !project_.config().templates.empty()) out.push_back(do_validate(templates_path));
  out.push_back(do_report());
  return out;
}

void Pipeline::set_registry(const HvacTermRegistry& reg) {
  reg.validate(res().tax);
  store::WriterLock lock(project_.dir());
  const auto previous = project_.has(art::registry) ? project_.read(art::registry) : std::string{};
  project_.write(art::registry, registry_to_json(reg));
  if (!project_.has(art::pointlist)) return;
  try {
    do_refresh();
  } catch (...) {
    if (previous.empty()) {
      project_.remove(art::registry);
    } else {
      project_.write(art::registry, previous);
    }
    throw;
  }
}

std::vector<PrefixCount> Pipeline::prefixes() const {
  require(Stage::match);
  std::map<std::string, PrefixCount> counts;
  for (const auto& p : stored_tokens()) {
    std::set<std::pair<std::string, bool>> seen;
    for (const auto& e : p.equipment) seen.insert({e.term, true});
    for (const auto& t : p.candidate_terms) seen.insert({t, false});
    for (const auto& [term, registered] : seen) {
      auto& c = counts[term];
      c.term = term;
      c.registered = c.registered || registered;
      ++c.count;
    }
  }
  std::vector<PrefixCount> out;
  for (auto& [k, v] : counts) out.push_back(std::move(v));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
  return out;
}

std::vector<match::MatchResult> Pipeline::matches() const {
  require(Stage::graph);
  return match::matches_from_json(project_.read(art::matches), project_.path(art::matches).string());
}

match::MatchStats Pipeline::stats() const { return match::compute_stats(matches()); }

match::MatchResult Pipeline::override_match(const std::string& code, const std::optional<std::string>& cls,
                                            const std::string& note) {
  store::WriterLock lock(project_.dir());
  require(Stage::graph);
  auto results = match::matches_from_json(project_.read(art::matches), project_.path(art::matches).string());
  auto it = std::find_if(results.begin(), results.end(), [&](const auto& r) { return r.code == code; });
  if (it == results.end()) throw NotFound("no point with code '" + code + "'");
  if (cls && !res().tax.has_class(*cls)) throw InvalidInput("unknown class '" + *cls + "'");
  match::apply_decisions(results, stored_tokens(), {{code, cls}}, res().tax);
  const auto matches_json = match::matches_to_json(results);
  const auto stats_json = match::stats_to_json(match::compute_stats(results));
  project_.append_decision({code, cls, note, {}});
  project_.write(art::matches, matches_json);
  project_.write(art::stats, stats_json);
  return *std::find_if(results.begin(), results.end(), [&](const auto& r) { return r.code == code; });
}

}  // namespace brickgen
