#include "brickgen/api.hpp"

#include <charconv>
#include <cstdlib>
#include <regex>

#include "brickgen/error.hpp"
#include "brickgen/pipeline.hpp"
#include "httplib.h"
#include "jsonutil.hpp"

namespace brickgen::api {

namespace fs = std::filesystem;
using detail::json;
namespace art = store::artifact;

BindAddress parse_bind(std::string_view text) {
  BindAddress out;
  std::string_view port = text;
  if (auto colon = text.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) out.host = std::string(text.substr(0, colon));
    port = text.substr(colon + 1);
  }
  int p = -1;
  auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), p);
  if (port.empty() || ec != std::errc() || ptr != port.data() + port.size() || p < 0 || p > 65535) {
    throw InvalidInput("invalid bind address '" + std::string(text) + "' (expected host:port)");
  }
  out.port = p;
  return out;
}

BindAddress resolve_bind(const std::string& flag) {
  if (!flag.empty()) return parse_bind(flag);
  if (const char* env = std::getenv("BRICKGEN_BIND"); env && *env) return parse_bind(env);
  return {};
}

namespace {

const std::regex kId("[A-Za-z0-9][A-Za-z0-9_-]*");

// Client-side faults found while reading a request.
struct BadRequest : Error {
  using Error::Error;
};

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(2, ' ', false, json::error_handler_t::replace) + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message,
                const json& extra = json::object()) {
  json err = {{"code", code}, {"message", message}};
  for (const auto& [k, v] : extra.items()) err[k] = v;
  send_json(res, {{"error", err}}, status);
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw BadRequest(std::string("malformed JSON body: ") + e.what());
  }
}

json stage_json(const std::vector<StageResult>& rs) {
  json out = json::array();
  for (const auto& r : rs) out.push_back({{"stage", to_string(r.stage)}, {"summary", r.summary}});
  return out;
}

json stats_json(const match::MatchStats& s) {
  return {{"total", s.total}, {"matched", s.matched}, {"nomatch", s.nomatch}, {"match_rate", s.match_rate}};
}

}  // namespace

struct Server::Impl {
  fs::path root;
  std::string cors;
  httplib::Server http;

  Pipeline project(const httplib::Request& req) const {
    const std::string id = req.matches[1];
    if (!fs::exists(root / id / std::string(art::config))) throw NotFound("no project '" + id + "'");
    return Pipeline::open(root / id);
  }

  // Runs a handler, translating library errors into JSON error responses.
  template <typename F>
  httplib::Server::Handler wrap(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const MissingPrerequisite& e) {
        send_error(res, 409, "missing_prerequisite", e.what(), {{"prerequisite", e.stage()}});
      } catch (const NotFound& e) {
        send_error(res, 404, "not_found", e.what());
      } catch (const ConflictError& e) {
        send_error(res, 409, "conflict", e.what());
      } catch (const BadRequest& e) {
        send_error(res, 400, "bad_request", e.what());
      } catch (const ParseError& e) {
        send_error(res, 400, "parse_error", e.what());
      } catch (const InvalidInput& e) {
        send_error(res, 400, "invalid_input", e.what());
      } catch (const json::exception& e) {
        send_error(res, 400, "bad_request", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  }

  void routes();
};

void Server::Impl::routes() {
  http.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", cors);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  http.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, res.status, res.status == 404 ? "not_found" : "error", "no such endpoint");
  });

  http.Get("/projects", wrap([this](const httplib::Request&, httplib::Response& res) {
    json ids = json::array();
    if (fs::is_directory(root)) {
      std::vector<std::string> names;
      for (const auto& e : fs::directory_iterator(root)) {
        if (fs::exists(e.path() / std::string(art::config))) names.push_back(e.path().filename().string());
      }
      std::sort(names.begin(), names.end());
      for (auto& n : names) ids.push_back(n);
    }
    send_json(res, {{"projects", ids}});
  }));

  http.Post("/projects", wrap([this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    if (!body.is_object() || !body.contains("id") || !body.at("id").is_string()) {
      throw BadRequest("body must be an object with a string 'id'");
    }
    const auto id = body.at("id").get<std::string>();
    if (!std::regex_match(id, kId)) throw BadRequest("project id must be letters, digits, '_' or '-'");
    auto cfg = store::default_config(id);
    if (body.contains("prefix")) cfg.build.prefix = body.at("prefix").get<std::string>();
    if (body.contains("base")) cfg.build.base = rdf::Iri(body.at("base").get<std::string>());
    if (body.contains("ts_namespace")) cfg.ts_namespace = body.at("ts_namespace").get<std::string>();
    if (body.contains("threshold")) cfg.match.threshold = match::parse_score(body.at("threshold").get<std::string>());
    if (body.contains("toggles")) cfg.build.toggles = build::ModuleToggles::parse(body.at("toggles").get<std::string>());
    if (!rdf::is_valid_prefix_name(cfg.build.prefix)) throw BadRequest("invalid prefix '" + cfg.build.prefix + "'");
    auto p = Pipeline::init(root / id, cfg);
    send_json(res, json::parse(store::config_to_json(p.project().config())), 201);
  }));

  http.Post(R"(/projects/([^/]+)/pointlist)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    auto p = project(req);
    std::vector<StageResult> stages;
    const auto type = req.get_header_value("Content-Type");
    if (type.rfind("application/json", 0) == 0) {
      const auto body = parse_body(req);
      if (!body.is_object() || !body.contains("pointlist") || !body.at("pointlist").is_string()) {
        throw BadRequest("body must carry the point list text under 'pointlist'");
      }
      const auto format = ingest::format_from_string(body.value("format", "csv"));
      stages.push_back(p.ingest_text(body.at("pointlist").get<std::string>(), format, body.value("timeseries", "")));
    } else {
      const auto format = type.find("json") != std::string::npos ? ingest::PointFormat::json : ingest::PointFormat::csv;
      stages.push_back(p.ingest_text(req.body, format));
    }
    for (auto& r : p.refresh()) stages.push_back(std::move(r));
    send_json(res, {{"stages", stage_json(stages)}, {"stats", stats_json(p.stats())}});
  }));

  http.Get(R"(/projects/([^/]+)/prefixes)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    json out = json::array();
    for (const auto& c : project(req).prefixes()) {
      out.push_back({{"term", c.term}, {"count", c.count}, {"registered", c.registered}});
    }
    send_json(res, out);
  }));

  http.Get(R"(/projects/([^/]+)/hvac-terms)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, json::parse(registry_to_json(project(req).registry())));
  }));

  http.Put(R"(/projects/([^/]+)/hvac-terms)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    auto p = project(req);
    parse_body(req);
    const auto reg = parse_registry_json(req.body, "request body");
    p.set_registry(reg);
    send_json(res, json::parse(registry_to_json(reg)));
  }));

  http.Get(R"(/projects/([^/]+)/matches)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    const auto status = req.has_param("status") ? req.get_param_value("status") : "all";
    std::optional<match::MatchStatus> filter;
    if (status != "all") {
      try {
        filter = match::status_from_string(status);
      } catch (const InvalidInput&) {
        throw BadRequest("status must be all, auto, overridden or nomatch");
      }
    }
    auto results = project(req).matches();
    std::erase_if(results, [&](const auto& r) { return filter && r.status != *filter; });
    send_json(res, json::parse(match::matches_to_json(results)));
  }));

  http.Put(R"(/projects/([^/]+)/matches/([^/]+))", wrap([this](const httplib::Request& req, httplib::Response& res) {
    auto p = project(req);
    const auto body = parse_body(req);
    if (!body.is_object() || !body.contains("class")) throw BadRequest("body must be an object with 'class'");
    const auto& cls = body.at("class");
    if (!cls.is_null() && !cls.is_string()) throw BadRequest("'class' must be a class name or null");
    const std::string code = req.matches[2];
    if (body.contains("code") && body.at("code") != code) throw BadRequest("body code does not match the URL");
    auto r = p.override_match(code, cls.is_null() ? std::nullopt : std::optional<std::string>(cls.get<std::string>()),
                              body.value("note", ""));
    send_json(res, json::parse(match::matches_to_json({r})).at(0));
  }));

  http.Post(R"(/projects/([^/]+)/graph)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    auto p = project(req);
    const auto stages = p.rebuild();
    send_json(res, {{"stages", stage_json(stages)}});
  }));

  http.Get(R"(/projects/([^/]+)/graph\.ttl)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    auto p = project(req);
    if (!p.project().has(art::model)) throw MissingPrerequisite("graph");
    res.set_content(p.project().read(art::model), "text/turtle; charset=utf-8");
  }));

  http.Post(R"(/projects/([^/]+)/validate)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    auto p = project(req);
    const auto body = parse_body(req);
    if (body.is_object() && body.contains("templates")) {
      // inline template library, kept with the project
      const bool yaml = body.value("format", "yaml") != "json";
      const auto text = body.at("templates").get<std::string>();
      validation::TemplateLibrary(validation::parse_templates(text, yaml, "request body"), p.taxonomy());
      const std::string name = yaml ? "templates.yaml" : "templates.json";
      auto cfg = p.project().config();
      cfg.templates = (p.project().dir() / name).string();
      {
        store::WriterLock lock(p.project().dir());
        p.project().write(name, text);
      }
      p.update_config(cfg);
    }
    p.validate();
    send_json(res, json::parse(p.project().read(art::validation)));
  }));

  http.Get(R"(/projects/([^/]+)/layout)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    auto p = project(req);
    if (!p.project().has(art::layout)) throw MissingPrerequisite("layout");
    send_json(res, json::parse(p.project().read(art::layout)));
  }));

  http.Get(R"(/projects/([^/]+)/stats)", wrap([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, stats_json(project(req).stats()));
  }));

  http.Get(R"(/projects/([^/]+)/timeseries/([0-9]+))", wrap([this](const httplib::Request& req, httplib::Response& res) {
    auto p = project(req);
    const auto from = req.has_param("from") ? req.get_param_value("from") : "0001-01-01";
    const auto to = req.has_param("to") ? req.get_param_value("to") : "9999-12-31";
    json out = json::array();
    for (const auto& s : p.project().get_timeseries(std::string(req.matches[2]), from, to)) {
      out.push_back({{"code", s.code}, {"timestamp", s.timestamp}, {"value", s.value}});
    }
    send_json(res, out);
  }));
}

Server::Server(fs::path root, std::string cors_origin) : impl_(std::make_unique<Impl>()) {
  impl_->root = std::move(root);
  impl_->cors = std::move(cors_origin);
  fs::create_directories(impl_->root);
  impl_->routes();
}

Server::~Server() = default;

int Server::bind(const BindAddress& addr) {
  if (addr.port == 0) {
    const int port = impl_->http.bind_to_any_port(addr.host);
    if (port < 0) throw Error("cannot bind " + addr.host);
    return port;
  }
  if (!impl_->http.bind_to_port(addr.host, addr.port)) {
    throw Error("cannot bind " + addr.host + ":" + std::to_string(addr.port));
  }
  return addr.port;
}

void Server::run() { impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

}  // namespace brickgen::api
