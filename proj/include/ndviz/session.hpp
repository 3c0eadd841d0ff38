#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ndviz/diagram.hpp"
#include "ndviz/engine.hpp"
#include "ndviz/frames.hpp"

namespace httplib {
class Server;
}

namespace ndviz {

struct ServiceLimits {
  std::size_t max_word = 64;
  std::size_t max_steps = 10'000;
  std::size_t max_nodes = 1'000'000;
  std::size_t max_sessions = 256;  // LRU capacity
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

struct Session {
  std::string id;
  Word word;
  ExploreOptions options;
  bool invariants = true;
  ComputationForest forest;  // owns the (possibly augmented) machine
  std::vector<Frame> frames;
  std::vector<std::string> frame_bodies;  // canonical JSON per frame
  std::chrono::system_clock::time_point created_at;
};

/// Strong validator: quoted FNV-1a 64 hex digest of the body.
std::string etag_of(std::string_view body);

/// HTTP-independent core of the session service. Each method maps one route
/// to a Response; the store is a mutex-guarded LRU of immutable sessions.
class SessionService {
 public:
  explicit SessionService(ServiceLimits limits = {}, RenderOptions render = render_options_from_env());

  /// POST /sessions with {"machine":{..},"word":[..]|"a,b","options":{"max_steps","add_dead","invariants"}}
  Response create(std::string_view body);
  Response frame(const std::string& id, std::string_view n) const;
  Response diagram(const std::string& id, std::string_view n, std::string_view format) const;
  Response jump(const std::string& id, std::string_view from, std::string_view dir) const;
  Response remove(const std::string& id);
  Response health() const;

  std::shared_ptr<const Session> find(const std::string& id) const;
  std::size_t size() const;
  const ServiceLimits& limits() const { return limits_; }

 private:
  std::string fresh_id();
  void insert(std::shared_ptr<const Session> session);

  ServiceLimits limits_;
  RenderOptions render_;
  mutable std::mutex mu_;
  mutable std::list<std::string> order_;  // most recently used first
  std::unordered_map<std::string, std::pair<std::shared_ptr<const Session>, std::list<std::string>::iterator>>
      store_;
  std::mt19937_64 rng_;
};

struct HttpOptions {
  std::string cors_origin = "*";
  std::optional<std::filesystem::path> static_dir;  // served at "/"; a stub page otherwise
};

/// Registers every route plus CORS, ETag/If-None-Match and static serving.
/// Throws std::invalid_argument if static_dir does not exist.
void mount_routes(httplib::Server& server, SessionService& service, const HttpOptions& options = {});

/// Blocks serving on host:port. Returns false if the socket cannot be bound.
bool serve(SessionService& service, const std::string& host, int port, const HttpOptions& options = {});

}  // namespace ndviz
