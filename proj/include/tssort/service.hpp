#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tssort/session.hpp"

namespace httplib {
class Server;
}

namespace tssort::service {

inline constexpr int kSchemaVersion = 1;

/// A service-level failure carrying the HTTP status it maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct PersistedSession {
  std::string id;
  std::vector<std::string> labels;
  SortSession engine;
  std::string created_at;
  std::string updated_at;
};

nlohmann::json to_json(const PersistedSession& session);
/// Replays the stored history and checks it reproduces the stored ratings
/// bit for bit. Throws ServiceError(500) on any inconsistency.
PersistedSession from_json(const nlohmann::json& doc);

/// Digest over the bit patterns of all ratings.
std::uint64_t ratings_digest(const SortSession& engine);

/// The token a client must echo to post the outcome of the current pair.
std::string pair_token(const SortSession& engine);

/// One JSON document per session, replaced atomically on every save.
class SessionStore {
 public:
  /// Creates the directory if needed and checks it is writable; throws
  /// std::runtime_error otherwise.
  explicit SessionStore(std::filesystem::path data_dir);

  void save(const PersistedSession& session) const;
  std::optional<PersistedSession> load(const std::string& id) const;
  bool exists(const std::string& id) const;
  const std::filesystem::path& directory() const { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& id) const;
  std::filesystem::path dir_;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

/// The session API independent of the HTTP transport. Requests for
/// different sessions run in parallel; requests for one session serialize.
class SessionService {
 public:
  explicit SessionService(std::filesystem::path data_dir);

  Response create_session(const nlohmann::json& body);
  Response get_next_pair(const std::string& id);
  Response post_outcome(const std::string& id, const nlohmann::json& body);
  Response get_ranking(const std::string& id);
  Response get_session(const std::string& id);
  Response healthz() const;

 private:
  struct Slot {
    std::mutex mutex;
    std::optional<PersistedSession> session;
  };

  std::shared_ptr<Slot> slot(const std::string& id);
  template <typename Fn>
  Response with_session(const std::string& id, Fn&& fn);

  SessionStore store_;
  std::mutex slots_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

/// HTTP front end:
///   POST /sessions                  create
///   GET  /sessions/{id}             full state
///   GET  /sessions/{id}/next-pair
///   POST /sessions/{id}/outcome
///   GET  /sessions/{id}/ranking
///   GET  /healthz
/// plus an optional static bundle under /ui/.
class HttpServer {
 public:
  HttpServer(SessionService& service, std::optional<std::filesystem::path> static_dir = {});
  ~HttpServer();

  /// Binds the listening socket; port 0 picks a free port. Returns the
  /// bound port, or nullopt if binding failed.
  std::optional<int> bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace tssort::service
