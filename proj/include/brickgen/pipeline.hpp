#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brickgen/builder.hpp"
#include "brickgen/extract.hpp"
#include "brickgen/ingest.hpp"
#include "brickgen/match.hpp"
#include "brickgen/ontology.hpp"
#include "brickgen/registry.hpp"
#include "brickgen/store.hpp"
#include "brickgen/validator.hpp"

namespace brickgen {

/// Stage order; a stage's prerequisites are the stages before it that
/// produce something it reads.
enum class Stage { ingest, translate, tokenize, match, layout, graph, validate, report };
std::string_view to_string(Stage s);

struct StageResult {
  Stage stage;
  std::string summary;  // one line
  std::vector<std::filesystem::path> artifacts;
  bool failed = false;  // validation failures only
};

struct PrefixCount {
  std::string term;
  std::size_t count = 0;  // points naming the term
  bool registered = false;
};

/// Stage runner over one project directory. Every public mutating call holds
/// the project's writer lock for its duration and checks inputs before
/// writing, so a failed call leaves the project files as they were.
class Pipeline {
 public:
  explicit Pipeline(store::Project project);

  /// Creates the project and seeds its registry from `registry_path`
  /// (shipped registry when empty).
  static Pipeline init(const std::filesystem::path& dir, store::ProjectConfig cfg,
                       const std::string& registry_path = {});
  static Pipeline open(const std::filesystem::path& dir) { return Pipeline(store::Project::open(dir)); }

  const store::Project& project() const noexcept { return project_; }
  void update_config(const store::ProjectConfig& cfg);

  StageResult ingest(const std::string& pointlist_path, const std::string& timeseries_path = {},
                     std::optional<ingest::PointFormat> format = std::nullopt);
  StageResult ingest_text(std::string_view pointlist, ingest::PointFormat format, std::string_view timeseries = {});
  StageResult translate();
  StageResult tokenize();
  StageResult match();
  StageResult layout();
  StageResult graph();
  /// Uses `templates_path` if given, else the configured templates.
  StageResult validate(const std::string& templates_path = {});
  StageResult report();

  /// Every stage from ingest on; validation only when templates are known.
  std::vector<StageResult> run_all(const std::string& pointlist_path, const std::string& timeseries_path = {},
                                   std::optional<ingest::PointFormat> format = std::nullopt,
                                   const std::string& templates_path = {});
  /// translate, tokenize, match, layout: the automatic part after an upload
  /// or a registry change.
  std::vector<StageResult> refresh();
  /// refresh then graph.
  std::vector<StageResult> rebuild();

  HvacTermRegistry registry() const;
  /// Validates against the taxonomy, stores it, and refreshes derived
  /// stages when a point list is present.
  void set_registry(const HvacTermRegistry& reg);
  std::vector<PrefixCount> prefixes() const;

  std::vector<match::MatchResult> matches() const;
  match::MatchStats stats() const;
  /// Records the decision and applies it to the stored matches. NotFound for
  /// an unknown code, InvalidInput for an unknown class.
  match::MatchResult override_match(const std::string& code, const std::optional<std::string>& cls,
                                    const std::string& note = {});

  const ontology::Taxonomy& taxonomy() const;

 private:
  struct Resources;
  StageResult do_ingest(const ingest::PointList& points, const std::vector<ingest::TimeseriesSample>* samples);
  StageResult do_translate();
  StageResult do_tokenize();
  StageResult do_match();
  StageResult do_layout();
  StageResult do_graph();
  StageResult do_validate(const std::string& templates_path);
  StageResult do_report();
  std::vector<StageResult> do_refresh();
  void require(Stage stage) const;
  ingest::PointList stored_points() const;
  std::vector<extract::TokenizedPoint> stored_tokens() const;
  Resources& res() const;

  store::Project project_;
  mutable std::shared_ptr<Resources> res_;
};

}  // namespace brickgen
