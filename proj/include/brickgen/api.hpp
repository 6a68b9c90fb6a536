#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace brickgen::api {

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// "host:port", ":port" or "port". InvalidInput otherwise.
BindAddress parse_bind(std::string_view text);
/// --bind value if given, else $BRICKGEN_BIND, else the default.
BindAddress resolve_bind(const std::string& flag);

/// HTTP JSON API over a directory of projects (<root>/<id>/).
class Server {
 public:
  explicit Server(std::filesystem::path root, std::string cors_origin = "*");
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const BindAddress& addr);
  /// Serves until stop(); call after bind().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace brickgen::api
