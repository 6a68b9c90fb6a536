#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brickgen/builder.hpp"
#include "brickgen/ingest.hpp"
#include "brickgen/match.hpp"

namespace brickgen::store {

namespace artifact {
inline constexpr std::string_view config = "config.json";
inline constexpr std::string_view registry = "registry.json";
inline constexpr std::string_view pointlist = "pointlist.csv";
inline constexpr std::string_view timeseries = "timeseries.csv";
inline constexpr std::string_view ts_index = "ts_index.json";
inline constexpr std::string_view decisions = "decisions.json";
inline constexpr std::string_view translated = "translated.json";
inline constexpr std::string_view tokens = "tokens.json";
inline constexpr std::string_view matches = "matches.json";
inline constexpr std::string_view stats = "stats.json";
inline constexpr std::string_view layout = "layout.json";
inline constexpr std::string_view model = "model.ttl";
inline constexpr std::string_view completion = "reports/completion.json";
inline constexpr std::string_view validation = "reports/validation.json";
inline constexpr std::string_view validation_table = "reports/validation.txt";
inline constexpr std::string_view summary = "reports/summary.json";
}  // namespace artifact

/// Decimal rendering of the first 128 bits of SHA-256(ns || 0x00 || code).
std::string timeseries_id(std::string_view ns, std::string_view code);

/// id <-> code, kept bijective.
class TimeseriesIndex {
 public:
  /// Mints (or returns the existing) id for `code`. ConflictError if the id
  /// is already held by another code.
  const std::string& assign(std::string_view ns, const std::string& code);
  std::optional<std::string> code_of(std::string_view id) const;
  std::optional<std::string> id_of(std::string_view code) const;
  const std::map<std::string, std::string, std::less<>>& by_code() const noexcept { return by_code_; }
  std::size_t size() const noexcept { return by_code_.size(); }

  std::string to_json() const;
  static TimeseriesIndex from_json(std::string_view text, const std::string& source = {});

 private:
  std::map<std::string, std::string, std::less<>> by_code_;
  std::map<std::string, std::string, std::less<>> by_id_;
};

struct DecisionEntry {
  std::string code;
  std::optional<std::string> cls;  // nullopt excludes the point
  std::string note;
  std::string timestamp;
  bool operator==(const DecisionEntry&) const = default;
};

/// Append-only; replay keeps the latest entry per code.
class DecisionLog {
 public:
  void append(DecisionEntry e) { entries_.push_back(std::move(e)); }
  const std::vector<DecisionEntry>& entries() const noexcept { return entries_; }
  match::Decisions replay() const;

  std::string to_json() const;
  static DecisionLog from_json(std::string_view text, const std::string& source = {});

 private:
  std::vector<DecisionEntry> entries_;
};

struct ProjectConfig {
  std::string id;
  std::string ts_namespace;  // defaults to id
  build::BuildConfig build;
  match::MatchConfig match;
  std::string dictionary;
  std::string abbreviations;
  std::string taxonomy;
  std::string templates;  // empty: no validation templates
  std::string created;
  std::string updated;
};

/// Defaults with data file paths pointing at the shipped data directory.
ProjectConfig default_config(const std::string& id);
std::string config_to_json(const ProjectConfig& cfg);
ProjectConfig config_from_json(std::string_view text, const std::string& source = {});

/// Shipped data directory: $BRICKGEN_DATA if set, else the build-time path.
std::string data_dir();
std::string now_utc();

/// Exclusive advisory lock on <dir>/.lock for the object's lifetime.
class WriterLock {
 public:
  explicit WriterLock(const std::filesystem::path& dir);
  ~WriterLock();
  WriterLock(const WriterLock&) = delete;
  WriterLock& operator=(const WriterLock&) = delete;

 private:
  int fd_ = -1;
};

class Project {
 public:
  /// ConflictError when the directory already holds a project.
  static Project create(const std::filesystem::path& dir, ProjectConfig cfg);
  /// NotFound when the directory or its config is missing.
  static Project open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  const ProjectConfig& config() const noexcept { return cfg_; }
  void set_config(ProjectConfig cfg);

  std::filesystem::path path(std::string_view name) const { return dir_ / std::string(name); }
  bool has(std::string_view name) const;
  std::string read(std::string_view name) const;
  void write(std::string_view name, std::string_view content) const;
  void remove(std::string_view name) const;

  TimeseriesIndex index() const;
  DecisionLog decisions() const;
  void append_decision(DecisionEntry e) const;

  /// Samples of the point behind `id` with from <= timestamp <= to.
  /// NotFound for an unknown id; InvalidInput when from > to.
  std::vector<ingest::TimeseriesSample> get_timeseries(std::string_view id, std::string_view from,
                                                       std::string_view to) const;

 private:
  Project(std::filesystem::path dir, ProjectConfig cfg) : dir_(std::move(dir)), cfg_(std::move(cfg)) {}
  std::filesystem::path dir_;
  ProjectConfig cfg_;
};

}  // namespace brickgen::store
