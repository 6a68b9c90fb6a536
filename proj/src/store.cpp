#include "brickgen/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdlib>
#include <ctime>

#include <openssl/evp.h>

#include "brickgen/error.hpp"
#include "fsutil.hpp"
#include "jsonutil.hpp"

namespace brickgen::store {

using detail::json;

std::string timeseries_id(std::string_view ns, std::string_view code) {
  std::string input(ns);
  input += '\0';
  input += code;
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(input.data(), input.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  unsigned __int128 v = 0;
  for (int i = 0; i < 16; ++i) v = (v << 8) | md[static_cast<std::size_t>(i)];
  std::string out;
  do {
    out += static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  } while (v != 0);
  return {out.rbegin(), out.rend()};
}

const std::string& TimeseriesIndex::assign(std::string_view ns, const std::string& code) {
  if (auto it = by_code_.find(code); it != by_code_.end()) return it->second;
  std::string id = timeseries_id(ns, code);
  if (auto clash = by_id_.find(id); clash != by_id_.end()) {
    throw ConflictError("timeseries id collision between " + clash->second + " and " + code);
  }
  by_id_.emplace(id, code);
  return by_code_.emplace(code, std::move(id)).first->second;
}

std::optional<std::string> TimeseriesIndex::code_of(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> TimeseriesIndex::id_of(std::string_view code) const {
  auto it = by_code_.find(code);
  if (it == by_code_.end()) return std::nullopt;
  return it->second;
}

std::string TimeseriesIndex::to_json() const {
  json doc = json::object();
  for (const auto& [code, id] : by_code_) doc[code] = id;
  return detail::dump_pretty(doc);
}

TimeseriesIndex TimeseriesIndex::from_json(std::string_view text, const std::string& source) {
  const std::string ctx = source.empty() ? "timeseries index" : source;
  const auto doc = detail::parse_json(text, ctx);
  if (!doc.is_object()) throw InvalidInput(ctx + ": expected an object of code -> id");
  TimeseriesIndex out;
  for (const auto& [code, id] : doc.items()) {
    if (!id.is_string()) throw InvalidInput(ctx + ": id for " + code + " must be a string");
    const auto s = id.get<std::string>();
    if (s.empty() || s.size() > 39 || s.find_first_not_of("0123456789") != std::string::npos) {
      throw InvalidInput(ctx + ": malformed id for " + code);
    }
    if (!out.by_id_.emplace(s, code).second) throw InvalidInput(ctx + ": id " + s + " mapped twice");
    out.by_code_.emplace(code, s);
  }
  return out;
}

match::Decisions DecisionLog::replay() const {
  match::Decisions out;
  for (const auto& e : entries_) out[e.code] = e.cls;
  return out;
}

std::string DecisionLog::to_json() const {
  json doc = json::array();
  for (const auto& e : entries_) {
    doc.push_back({{"code", e.code},
                   {"class", e.cls ? json(*e.cls) : json(nullptr)},
                   {"note", e.note},
                   {"timestamp", e.timestamp}});
  }
  return detail::dump_pretty(doc);
}

DecisionLog DecisionLog::from_json(std::string_view text, const std::string& source) {
  const std::string ctx = source.empty() ? "decision log" : source;
  const auto doc = detail::parse_json(text, ctx);
  if (!doc.is_array()) throw InvalidInput(ctx + ": expected an array");
  DecisionLog out;
  for (const auto& j : doc) {
    DecisionEntry e;
    e.code = detail::require_string(j, "code", ctx);
    const auto& cls = detail::require_member(j, "class", ctx);
    if (!cls.is_null()) {
      if (!cls.is_string()) throw InvalidInput(ctx + ": class must be a string or null");
      e.cls = cls.get<std::string>();
    }
    e.note = j.value("note", "");
    e.timestamp = j.value("timestamp", "");
    out.append(std::move(e));
  }
  return out;
}

std::string data_dir() {
  if (const char* env = std::getenv("BRICKGEN_DATA"); env && *env) return env;
  return BRICKGEN_DATA_DIR;
}

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ProjectConfig default_config(const std::string& id) {
  ProjectConfig c;
  c.id = id;
  c.ts_namespace = id;
  const auto d = data_dir();
  c.dictionary = d + "/dictionary.json";
  c.abbreviations = d + "/abbreviations.json";
  c.taxonomy = d + "/taxonomy/brick_subset.json";
  return c;
}

std::string config_to_json(const ProjectConfig& cfg) {
  json doc = {{"id", cfg.id},
              {"ts_namespace", cfg.ts_namespace},
              {"prefix", cfg.build.prefix},
              {"base", cfg.build.base.str()},
              {"toggles", cfg.build.toggles.to_string()},
              {"threshold", std::to_string(cfg.match.threshold.numerator()) + "/" +
                                std::to_string(cfg.match.threshold.denominator())},
              {"max_alternates", cfg.match.max_alternates},
              {"kind_filter", cfg.match.kind_filter},
              {"dictionary", cfg.dictionary},
              {"abbreviations", cfg.abbreviations},
              {"taxonomy", cfg.taxonomy},
              {"templates", cfg.templates},
              {"created", cfg.created},
              {"updated", cfg.updated}};
  return detail::dump_pretty(doc);
}

ProjectConfig config_from_json(std::string_view text, const std::string& source) {
  const std::string ctx = source.empty() ? "config" : source;
  const auto doc = detail::parse_json(text, ctx);
  if (!doc.is_object()) throw InvalidInput(ctx + ": expected an object");
  ProjectConfig c;
  try {
    c.id = detail::require_string(doc, "id", ctx);
    c.ts_namespace = doc.value("ts_namespace", c.id);
    c.build.prefix = doc.value("prefix", c.build.prefix);
    c.build.base = rdf::Iri(doc.value("base", c.build.base.str()));
    c.build.toggles = build::ModuleToggles::parse(doc.value("toggles", "all"));
    c.match.threshold = match::parse_score(doc.value("threshold", "1/4"));
    c.match.max_alternates = doc.value("max_alternates", c.match.max_alternates);
    c.match.kind_filter = doc.value("kind_filter", true);
    c.dictionary = detail::require_string(doc, "dictionary", ctx);
    c.abbreviations = detail::require_string(doc, "abbreviations", ctx);
    c.taxonomy = detail::require_string(doc, "taxonomy", ctx);
    c.templates = doc.value("templates", "");
    c.created = doc.value("created", "");
    c.updated = doc.value("updated", "");
  } catch (const json::exception& e) {
    throw InvalidInput(ctx + ": " + e.what());
  }
  if (c.match.threshold > 1) throw InvalidInput(ctx + ": threshold must be within 0..1");
  return c;
}

WriterLock::WriterLock(const std::filesystem::path& dir) {
  const auto p = (dir / ".lock").string();
  fd_ = ::open(p.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (fd_ < 0) throw Error("cannot open lock file '" + p + "'");
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    throw Error("cannot lock '" + p + "'");
  }
}

WriterLock::~WriterLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

Project Project::create(const std::filesystem::path& dir, ProjectConfig cfg) {
  if (std::filesystem::exists(dir / std::string(artifact::config))) {
    throw ConflictError("project already exists at '" + dir.string() + "'");
  }
  std::filesystem::create_directories(dir / "reports");
  if (cfg.ts_namespace.empty()) cfg.ts_namespace = cfg.id;
  if (cfg.created.empty()) cfg.created = now_utc();
  cfg.updated = cfg.created;
  Project p(dir, std::move(cfg));
  p.write(artifact::config, config_to_json(p.cfg_));
  if (!p.has(artifact::decisions)) p.write(artifact::decisions, DecisionLog{}.to_json());
  return p;
}

Project Project::open(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw NotFound("no project directory '" + dir.string() + "'");
  const auto cfg_path = dir / std::string(artifact::config);
  if (!std::filesystem::exists(cfg_path)) throw NotFound("no project at '" + dir.string() + "' (missing config.json)");
  return Project(dir, config_from_json(detail::read_file(cfg_path), cfg_path.string()));
}

void Project::set_config(ProjectConfig cfg) {
  cfg.updated = now_utc();
  write(artifact::config, config_to_json(cfg));
  cfg_ = std::move(cfg);
}

bool Project::has(std::string_view name) const { return std::filesystem::exists(path(name)); }

std::string Project::read(std::string_view name) const { return detail::read_file(path(name)); }

void Project::write(std::string_view name, std::string_view content) const {
  detail::write_file_atomic(path(name), content);
}

void Project::remove(std::string_view name) const { std::filesystem::remove(path(name)); }

TimeseriesIndex Project::index() const {
  if (!has(artifact::ts_index)) return {};
  return TimeseriesIndex::from_json(read(artifact::ts_index), path(artifact::ts_index).string());
}

DecisionLog Project::decisions() const {
  if (!has(artifact::decisions)) return {};
  return DecisionLog::from_json(read(artifact::decisions), path(artifact::decisions).string());
}

void Project::append_decision(DecisionEntry e) const {
  auto log = decisions();
  if (e.timestamp.empty()) e.timestamp = now_utc();
  log.append(std::move(e));
  write(artifact::decisions, log.to_json());
}

std::vector<ingest::TimeseriesSample> Project::get_timeseries(std::string_view id, std::string_view from,
                                                              std::string_view to) const {
  const auto code = index().code_of(id);
  if (!code) throw NotFound("unknown timeseries id '" + std::string(id) + "'");
  const auto lo = ingest::normalize_timestamp(from);
  const auto hi = ingest::normalize_timestamp(to);
  if (!lo || !hi) throw InvalidInput("unparseable time range");
  if (*lo > *hi) throw InvalidInput("time range start is after its end");
  std::vector<ingest::TimeseriesSample> out;
  if (!has(artifact::timeseries)) return out;
  // date-only upper bound covers the whole day
  std::string upper = *hi;
  if (std::string_view(to).find_first_of("T :") == std::string_view::npos) upper = upper.substr(0, 10) + "T23:59:59";
  for (auto& s : ingest::parse_timeseries(path(artifact::timeseries).string())) {
    if (s.code == *code && s.timestamp >= *lo && s.timestamp <= upper) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace brickgen::store
