#include "tssort/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <httplib.h>

#include "tssort/harness.hpp"

namespace tssort::service {

namespace {

using nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string new_session_id() {
  static std::mutex mutex;
  static std::random_device device;
  std::lock_guard lock(mutex);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%08x%08x%08x%08x", device(), device(), device(), device());
  return buf;
}

bool well_formed_id(const std::string& id) {
  static const std::regex pattern("[0-9a-f]{32}");
  return std::regex_match(id, pattern);
}

json error_body(const std::string& message) {
  return {{"error", message}, {"schema_version", kSchemaVersion}};
}

Outcome parse_winner(const json& value) {
  if (!value.is_string()) throw ServiceError(400, "winner must be one of first, second, draw");
  const auto s = value.get<std::string>();
  if (s == "first") return Outcome::first_wins;
  if (s == "second") return Outcome::second_wins;
  if (s == "draw") return Outcome::draw;
  throw ServiceError(400, "winner must be one of first, second, draw");
}

Outcome outcome_from_name(const std::string& name) {
  if (name == "first") return Outcome::first_wins;
  if (name == "second") return Outcome::second_wins;
  if (name == "draw") return Outcome::draw;
  throw ServiceError(500, "stored outcome '" + name + "' is not valid");
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

json progress(const PersistedSession& s) {
  return {{"session_id", s.id},
          {"comparisons_done", s.engine.comparisons_done()},
          {"budget", s.engine.budget()},
          {"done", s.engine.is_finished()},
          {"schema_version", kSchemaVersion}};
}

json params_to_json(const SessionParams& p) {
  return {{"trueskill",
           {{"mu0", p.trueskill.mu0},
            {"sigma0", p.trueskill.sigma0},
            {"beta", p.trueskill.beta},
            {"epsilon", p.trueskill.epsilon}}},
          {"elo",
           {{"initial_score", p.elo.initial_score},
            {"k_factor", p.elo.k_factor},
            {"beta", p.elo.beta}}}};
}

SessionParams params_from_json(const json& doc) {
  SessionParams p;
  if (doc.is_null()) return p;
  if (!doc.is_object()) throw ServiceError(400, "params must be an object");
  if (auto ts = doc.find("trueskill"); ts != doc.end()) {
    p.trueskill.mu0 = ts->value("mu0", p.trueskill.mu0);
    p.trueskill.sigma0 = ts->value("sigma0", p.trueskill.sigma0);
    p.trueskill.beta = ts->value("beta", p.trueskill.beta);
    p.trueskill.epsilon = ts->value("epsilon", p.trueskill.epsilon);
  }
  if (auto elo = doc.find("elo"); elo != doc.end()) {
    p.elo.initial_score = elo->value("initial_score", p.elo.initial_score);
    p.elo.k_factor = elo->value("k_factor", p.elo.k_factor);
    p.elo.beta = elo->value("beta", p.elo.beta);
  }
  if (!p.trueskill.valid()) throw ServiceError(400, "invalid trueskill params");
  if (!p.elo.valid()) throw ServiceError(400, "invalid elo params");
  return p;
}

void write_file_durably(const std::filesystem::path& path, const std::string& contents) {
  auto temp = path;
  temp += ".tmp";
  const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw std::runtime_error("cannot open " + temp.string());
  std::size_t written = 0;
  while (written < contents.size()) {
    const ssize_t n = ::write(fd, contents.data() + written, contents.size() - written);
    if (n <= 0) {
      ::close(fd);
      throw std::runtime_error("write failed for " + temp.string());
    }
    written += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  std::filesystem::rename(temp, path);
}

}  // namespace

std::uint64_t ratings_digest(const SortSession& engine) {
  std::uint64_t hash = fnv1a64("");
  auto feed = [&](double value) {
    const auto bits = std::bit_cast<std::uint64_t>(value);
    char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    hash = fnv1a64(std::string_view(bytes, 8), hash);
  };
  for (const auto& r : engine.gaussian_ratings()) {
    feed(r.mu);
    feed(r.sigma);
  }
  for (const auto& r : engine.elo_ratings()) feed(r.score);
  return hash;
}

std::string pair_token(const SortSession& engine) {
  const PairChoice pair = engine.next_pair();
  return std::to_string(engine.comparisons_done()) + ":" + std::to_string(pair.first) + ":" +
         std::to_string(pair.second);
}

json to_json(const PersistedSession& s) {
  json history = json::array();
  for (const auto& entry : s.engine.history()) {
    history.push_back(
        {{"first", entry.pair.first}, {"second", entry.pair.second}, {"outcome", to_string(entry.outcome)}});
  }
  json ratings = json::array();
  for (const auto& r : s.engine.gaussian_ratings()) ratings.push_back({{"mu", r.mu}, {"sigma", r.sigma}});
  for (const auto& r : s.engine.elo_ratings()) ratings.push_back({{"score", r.score}});
  return {{"schema_version", kSchemaVersion},
          {"id", s.id},
          {"labels", s.labels},
          {"algorithm", to_string(s.engine.algorithm())},
          {"params", params_to_json(s.engine.params())},
          {"created_at", s.created_at},
          {"updated_at", s.updated_at},
          {"budget", s.engine.budget()},
          {"comparisons_done", s.engine.comparisons_done()},
          {"done", s.engine.is_finished()},
          {"history", history},
          {"ratings", ratings},
          {"ratings_digest", hex64(ratings_digest(s.engine))}};
}

PersistedSession from_json(const json& doc) {
  try {
    const int version = doc.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      throw ServiceError(500, "unsupported schema_version " + std::to_string(version));
    }
    auto labels = doc.at("labels").get<std::vector<std::string>>();
    const Algorithm algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    const SessionParams params = params_from_json(doc.at("params"));
    std::vector<HistoryEntry> history;
    for (const auto& e : doc.at("history")) {
      history.push_back({{e.at("first").get<std::size_t>(), e.at("second").get<std::size_t>()},
                         outcome_from_name(e.at("outcome").get<std::string>())});
    }
    SortSession engine = SortSession::replay(labels.size(), algorithm, params, history);
    if (hex64(ratings_digest(engine)) != doc.at("ratings_digest").get<std::string>()) {
      throw ServiceError(500, "replayed history does not reproduce the stored ratings");
    }
    return {doc.at("id").get<std::string>(), std::move(labels), std::move(engine),
            doc.at("created_at").get<std::string>(), doc.at("updated_at").get<std::string>()};
  } catch (const ServiceError&) {
    throw;
  } catch (const std::exception& e) {
    throw ServiceError(500, std::string("corrupt session document: ") + e.what());
  }
}

SessionStore::SessionStore(std::filesystem::path data_dir) : dir_(std::move(data_dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw std::runtime_error("data dir " + dir_.string() + " cannot be created");
  }
  const auto probe = dir_ / ".write-probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok") || !out.flush()) {
      throw std::runtime_error("data dir " + dir_.string() + " is not writable");
    }
  }
  std::filesystem::remove(probe, ec);
}

std::filesystem::path SessionStore::path_for(const std::string& id) const {
  return dir_ / (id + ".json");
}

void SessionStore::save(const PersistedSession& session) const {
  write_file_durably(path_for(session.id), to_json(session).dump(2) + "\n");
}

bool SessionStore::exists(const std::string& id) const {
  return std::filesystem::exists(path_for(id));
}

std::optional<PersistedSession> SessionStore::load(const std::string& id) const {
  std::ifstream in(path_for(id));
  if (!in) return std::nullopt;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ServiceError(500, std::string("unreadable session document: ") + e.what());
  }
  return from_json(doc);
}

SessionService::SessionService(std::filesystem::path data_dir) : store_(std::move(data_dir)) {}

std::shared_ptr<SessionService::Slot> SessionService::slot(const std::string& id) {
  std::lock_guard lock(slots_mutex_);
  auto& entry = slots_[id];
  if (!entry) entry = std::make_shared<Slot>();
  return entry;
}

template <typename Fn>
Response SessionService::with_session(const std::string& id, Fn&& fn) {
  try {
    if (!well_formed_id(id)) throw ServiceError(404, "unknown session " + id);
    auto s = slot(id);
    std::lock_guard lock(s->mutex);
    if (!s->session) {
      s->session = store_.load(id);
      if (!s->session) throw ServiceError(404, "unknown session " + id);
    }
    return fn(*s->session);
  } catch (const ServiceError& e) {
    return {e.status(), error_body(e.what())};
  } catch (const std::exception& e) {
    return {500, error_body(e.what())};
  }
}

Response SessionService::create_session(const json& body) {
  try {
    if (!body.is_object()) throw ServiceError(400, "request body must be a JSON object");
    const auto items = body.find("items");
    if (items == body.end() || !items->is_array()) {
      throw ServiceError(400, "items must be an array of labels");
    }
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const auto& item : *items) {
      if (!item.is_string() || item.get<std::string>().empty()) {
        throw ServiceError(400, "items must be nonempty strings");
      }
      labels.push_back(item.get<std::string>());
      if (!seen.insert(labels.back()).second) {
        throw ServiceError(400, "duplicate item label '" + labels.back() + "'");
      }
    }
    if (labels.size() < 2) throw ServiceError(400, "at least 2 items are required");

    Algorithm algorithm = Algorithm::tssort_partner_wover;
    if (auto a = body.find("algorithm"); a != body.end() && !a->is_null()) {
      try {
        algorithm = parse_algorithm(a->get<std::string>());
      } catch (const std::exception& e) {
        throw ServiceError(400, e.what());
      }
    }
    SessionParams params = params_from_json(body.value("params", json()));
    params.budget_multiplier = 1.0;

    std::string id;
    do {
      id = new_session_id();
    } while (store_.exists(id));
    const std::string now = utc_now();
    PersistedSession session{id, std::move(labels), SortSession(seen.size(), algorithm, params),
                             now, now};
    try {
      store_.save(session);
    } catch (const std::exception& e) {
      throw ServiceError(500, std::string("storage failure: ") + e.what());
    }
    json out = progress(session);
    out["algorithm"] = to_string(algorithm);
    out["item_count"] = session.labels.size();
    auto s = slot(id);
    std::lock_guard lock(s->mutex);
    s->session = std::move(session);
    return {201, out};
  } catch (const ServiceError& e) {
    return {e.status(), error_body(e.what())};
  } catch (const std::exception& e) {
    return {500, error_body(e.what())};
  }
}

Response SessionService::get_next_pair(const std::string& id) {
  return with_session(id, [&](PersistedSession& s) -> Response {
    if (s.engine.is_finished()) {
      json out = progress(s);
      out["error"] = "session is finished";
      out["ranking"] = "/sessions/" + s.id + "/ranking";
      return {409, out};
    }
    const PairChoice pair = s.engine.next_pair();
    json out = progress(s);
    out["pair_token"] = pair_token(s.engine);
    out["first"] = {{"index", pair.first}, {"label", s.labels[pair.first]}};
    out["second"] = {{"index", pair.second}, {"label", s.labels[pair.second]}};
    return {200, out};
  });
}

Response SessionService::post_outcome(const std::string& id, const json& body) {
  return with_session(id, [&](PersistedSession& s) -> Response {
    if (!body.is_object()) throw ServiceError(400, "request body must be a JSON object");
    const auto winner = body.find("winner");
    if (winner == body.end()) throw ServiceError(400, "winner is required");
    const Outcome outcome = parse_winner(*winner);
    const auto token = body.find("pair_token");
    if (token == body.end() || !token->is_string()) throw ServiceError(400, "pair_token is required");
    if (s.engine.is_finished()) throw ServiceError(409, "session is finished");
    if (token->get<std::string>() != pair_token(s.engine)) {
      throw ServiceError(409, "stale pair_token; fetch the next pair again");
    }

    // Apply to a copy so a storage failure leaves the live state untouched.
    PersistedSession updated = s;
    updated.engine.apply_outcome(updated.engine.next_pair(), outcome);
    updated.updated_at = utc_now();
    try {
      store_.save(updated);
    } catch (const std::exception& e) {
      throw ServiceError(500, std::string("storage failure: ") + e.what());
    }
    s = std::move(updated);
    return {200, progress(s)};
  });
}

Response SessionService::get_ranking(const std::string& id) {
  return with_session(id, [&](PersistedSession& s) -> Response {
    json rows = json::array();
    const auto order = s.engine.order();
    const bool trueskill = uses_trueskill(s.engine.algorithm());
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
      const std::size_t item = order[rank];
      json row = {{"rank", rank + 1}, {"index", item}, {"label", s.labels[item]}};
      if (trueskill) {
        const GaussianRating& r = s.engine.gaussian_ratings()[item];
        row["mu"] = r.mu;
        row["sigma"] = r.sigma;
        row["conservative_score"] = conservative_score(r);
      } else {
        const double score = s.engine.elo_ratings()[item].score;
        row["mu"] = score;
        row["sigma"] = 0.0;
        row["conservative_score"] = score;
      }
      rows.push_back(row);
    }
    json out = progress(s);
    out["algorithm"] = to_string(s.engine.algorithm());
    out["ranking"] = rows;
    return {200, out};
  });
}

Response SessionService::get_session(const std::string& id) {
  return with_session(id, [&](PersistedSession& s) -> Response { return {200, to_json(s)}; });
}

Response SessionService::healthz() const {
  return {200, {{"status", "ok"}, {"schema_version", kSchemaVersion}}};
}

HttpServer::HttpServer(SessionService& service, std::optional<std::filesystem::path> static_dir)
    : server_(std::make_unique<httplib::Server>()) {
  auto& svr = *server_;
  // The library default also sets SO_REUSEPORT, which would let a second
  // server share an occupied port instead of failing to bind.
  svr.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto parse_body = [](const httplib::Request& req) -> std::optional<json> {
    if (req.body.empty()) return json::object();
    try {
      return json::parse(req.body);
    } catch (const json::exception&) {
      return std::nullopt;
    }
  };
  const Response malformed{400, error_body("request body is not valid JSON")};

  svr.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  svr.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  svr.Get("/healthz", [&service, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, service.healthz());
  });
  svr.Post("/sessions", [&service, reply, parse_body, malformed](const httplib::Request& req,
                                                                 httplib::Response& res) {
    const auto body = parse_body(req);
    reply(res, body ? service.create_session(*body) : malformed);
  });
  svr.Get(R"(/sessions/([^/]+))", [&service, reply](const httplib::Request& req,
                                                     httplib::Response& res) {
    reply(res, service.get_session(req.matches[1]));
  });
  svr.Get(R"(/sessions/([^/]+)/next-pair)",
          [&service, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.get_next_pair(req.matches[1]));
          });
  svr.Post(R"(/sessions/([^/]+)/outcome)", [&service, reply, parse_body, malformed](
                                               const httplib::Request& req,
                                               httplib::Response& res) {
    const auto body = parse_body(req);
    reply(res, body ? service.post_outcome(req.matches[1], *body) : malformed);
  });
  svr.Get(R"(/sessions/([^/]+)/ranking)",
          [&service, reply](const httplib::Request& req, httplib::Response& res) {
            reply(res, service.get_ranking(req.matches[1]));
          });
  if (static_dir) svr.set_mount_point("/ui", static_dir->string());
  // Only reached when no handler produced a body, e.g. unknown routes.
  svr.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    res.set_content(error_body("no route for " + req.method + " " + req.path).dump(),
                    "application/json");
  });
}

HttpServer::~HttpServer() { stop(); }

std::optional<int> HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound <= 0) return std::nullopt;
    return bound;
  }
  if (!server_->bind_to_port(host, port)) return std::nullopt;
  return port;
}

bool HttpServer::serve() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace tssort::service
