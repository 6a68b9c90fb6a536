// brickgen: point list -> Brick model, stage by stage or all at once.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "brickgen/api.hpp"
#include "brickgen/error.hpp"
#include "brickgen/pipeline.hpp"

namespace fs = std::filesystem;
using namespace brickgen;

namespace {

struct Options {
  std::string project = ".";
  std::string id;
  std::string dict;
  std::string abbreviations;
  std::string taxonomy;
  std::string registry;
  std::string templates;
  std::string threshold;
  std::string toggles;
  std::string format;
  std::string prefix;
  std::string base;
  std::string pointlist;
  std::string timeseries;
  std::string bind;
  std::string root;
};

std::optional<ingest::PointFormat> format_flag(const Options& o) {
  if (o.format.empty()) return std::nullopt;
  return ingest::format_from_string(o.format);
}

// Flags that map onto project config.
void apply_flags(store::ProjectConfig& cfg, const Options& o) {
  auto abs = [](const std::string& p) { return fs::absolute(p).string(); };
  if (!o.dict.empty()) cfg.dictionary = abs(o.dict);
  if (!o.abbreviations.empty()) cfg.abbreviations = abs(o.abbreviations);
  if (!o.taxonomy.empty()) cfg.taxonomy = abs(o.taxonomy);
  if (!o.templates.empty()) cfg.templates = abs(o.templates);
  if (!o.threshold.empty()) {
    const auto t = match::parse_score(o.threshold);
    if (t > 1) throw InvalidInput("--threshold must be within 0..1");
    cfg.match.threshold = t;
  }
  if (!o.toggles.empty()) cfg.build.toggles = build::ModuleToggles::parse(o.toggles);
  if (!o.prefix.empty()) cfg.build.prefix = o.prefix;
  if (!o.base.empty()) cfg.build.base = rdf::Iri(o.base);
}

Pipeline init_project(const Options& o) {
  const fs::path dir = o.project;
  auto cfg = store::default_config(o.id.empty() ? fs::absolute(dir).lexically_normal().filename().string() : o.id);
  if (cfg.id.empty()) cfg.id = "project";
  apply_flags(cfg, o);
  return Pipeline::init(dir, cfg, o.registry.empty() ? std::string{} : fs::absolute(o.registry).string());
}

// Opens the project and folds any config flags into it.
Pipeline open_project(const Options& o) {
  auto p = Pipeline::open(o.project);
  auto cfg = p.project().config();
  const auto before = store::config_to_json(cfg);
  apply_flags(cfg, o);
  if (store::config_to_json(cfg) != before) p.update_config(cfg);
  if (!o.registry.empty()) p.set_registry(load_registry(o.registry));
  return p;
}

int print(const StageResult& r) {
  std::cout << r.summary << "\n";
  if (r.failed) {
    for (const auto& a : r.artifacts) std::cout << "  report: " << a.string() << "\n";
  }
  return r.failed ? 1 : 0;
}

int print_all(const std::vector<StageResult>& rs) {
  int code = 0;
  for (const auto& r : rs) code = std::max(code, print(r));
  return code;
}

api::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turn building point lists into Brick models"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--project", o.project, "Project directory")->capture_default_str();
  app.add_option("--dict", o.dict, "Translation dictionary (JSON)");
  app.add_option("--abbreviations", o.abbreviations, "Abbreviation table (JSON)");
  app.add_option("--taxonomy", o.taxonomy, "Brick class taxonomy (JSON)");
  app.add_option("--registry", o.registry, "HVAC term registry (JSON)");
  app.add_option("--templates", o.templates, "Validation templates (YAML or JSON)");
  app.add_option("--threshold", o.threshold, "Match threshold in 0..1 (decimal or n/d)");
  app.add_option("--toggles", o.toggles, "Relation modules: all, none, a list, or -name entries");
  app.add_option("--format", o.format, "Point list format")->check(CLI::IsMember({"csv", "json"}));

  auto* init = app.add_subcommand("init", "Create a project");
  init->add_option("--id", o.id, "Project id (defaults to the directory name)");
  init->add_option("--prefix", o.prefix, "Turtle prefix for building IRIs");
  init->add_option("--base", o.base, "Base IRI for building entities");

  auto* ingest_cmd = app.add_subcommand("ingest", "Read the point list and timeseries");
  ingest_cmd->add_option("pointlist", o.pointlist, "Point list file")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--timeseries", o.timeseries, "Timeseries CSV")->check(CLI::ExistingFile);

  auto* translate = app.add_subcommand("translate", "Translate labels with the dictionary");
  auto* tokenize = app.add_subcommand("tokenize", "Normalize and tokenize labels");
  auto* match_cmd = app.add_subcommand("match", "Match points to Brick classes");
  auto* layout = app.add_subcommand("layout", "Build the semi-layout");
  auto* graph = app.add_subcommand("graph", "Build the Brick model");
  auto* validate = app.add_subcommand("validate", "Check the model against templates");
  auto* report = app.add_subcommand("report", "Summarize the project");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--bind", o.bind, "host:port (default $BRICKGEN_BIND or 127.0.0.1:8080)");
  serve->add_option("--root", o.root, "Directory holding projects (default: --project)");

  auto* run_all = app.add_subcommand("run-all", "Run every stage, creating the project if needed");
  run_all->add_option("pointlist", o.pointlist, "Point list file")->check(CLI::ExistingFile);
  run_all->add_option("--timeseries", o.timeseries, "Timeseries CSV")->check(CLI::ExistingFile);
  run_all->add_option("--id", o.id, "Project id for a new project");
  run_all->add_option("--prefix", o.prefix, "Turtle prefix for a new project");
  run_all->add_option("--base", o.base, "Base IRI for a new project");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (init->parsed()) {
      auto p = init_project(o);
      std::cout << "init: project '" << p.project().config().id << "' at " << p.project().dir().string() << "\n";
      return 0;
    }
    if (serve->parsed()) {
      api::Server server(o.root.empty() ? fs::path(o.project) : fs::path(o.root));
      const auto addr = api::resolve_bind(o.bind);
      const int port = server.bind(addr);
      std::cout << "serving on " << addr.host << ":" << port << std::endl;
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.run();
      g_server = nullptr;
      return 0;
    }
    if (run_all->parsed()) {
      const bool fresh = !fs::exists(fs::path(o.project) / std::string(store::artifact::config));
      if (fresh && o.pointlist.empty()) throw MissingPrerequisite("ingest");
      auto p = fresh ? init_project(o) : open_project(o);
      return print_all(p.run_all(o.pointlist, o.timeseries, format_flag(o)));
    }

    auto p = open_project(o);
    if (ingest_cmd->parsed()) return print(p.ingest(o.pointlist, o.timeseries, format_flag(o)));
    if (translate->parsed()) return print(p.translate());
    if (tokenize->parsed()) return print(p.tokenize());
    if (match_cmd->parsed()) return print(p.match());
    if (layout->parsed()) return print(p.layout());
    if (graph->parsed()) return print(p.graph());
    if (validate->parsed()) return print(p.validate());
    if (report->parsed()) return print(p.report());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
