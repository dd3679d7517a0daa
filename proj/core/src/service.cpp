#include "trymove/service.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "json_util.hpp"
#include "trymove/engine.hpp"
#include "trymove/error.hpp"
#include "trymove/sessionio.hpp"

namespace trymove::service {

namespace {

using ojson = nlohmann::ordered_json;

struct ApiSession {
  explicit ApiSession(Session s, double t0) : session(std::move(s)), started_at(t0) {}

  std::mutex mu;
  std::condition_variable cv;
  Session session;
  double started_at;
  std::vector<std::string> messages;  // SSE frames, one per applied event
  int subscribers = 0;
};

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::not_found: return 404;
    case ErrorKind::conflict:
    case ErrorKind::session_closed:
    case ErrorKind::hint_unavailable: return 409;
    case ErrorKind::io: return 500;
    default: return 400;
  }
}

void send_json(httplib::Response& res, const ojson& doc, int status = 200) {
  res.status = status;
  res.set_content(doc.dump() + "\n", "application/json");
}

void send_error(httplib::Response& res, ErrorKind kind, const std::string& message) {
  ojson doc;
  doc["version"] = kApiSchema;
  doc["error"] = {{"kind", std::string(to_string(kind))}, {"message", message}};
  send_json(res, doc, status_for(kind));
}

ojson hint_json(const Hint& h) {
  ojson doc;
  doc["piece_id"] = h.piece_id;
  doc["remaining_cells"] = h.remaining_cells;
  doc["suggested"] = std::string(code(h.suggested));
  if (h.pose_delta) {
    doc["pose_delta"] = {{"translation", detail::vec3_json(h.pose_delta->translation)},
                         {"rotation", h.pose_delta->rotation}};
  } else {
    doc["pose_delta"] = nullptr;
  }
  return doc;
}

ojson score_delta(const ScoreBreakdown& before, const ScoreBreakdown& after) {
  return {{"time_bonus", after.time_bonus - before.time_bonus},
          {"gesture_sum", after.gesture_sum - before.gesture_sum},
          {"weighted_sum", after.weighted_sum - before.weighted_sum},
          {"final_score", after.final_score - before.final_score}};
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace

Clock steady_clock() {
  return [] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
  };
}

void apply_bind(Options& options, const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) {
    if (!bind.empty()) options.host = bind;
    return;
  }
  if (colon > 0) options.host = bind.substr(0, colon);
  const std::string port = bind.substr(colon + 1);
  try {
    std::size_t used = 0;
    const int p = std::stoi(port, &used);
    if (used != port.size() || p < 0 || p > 65535) throw std::out_of_range(port);
    options.port = p;
  } catch (const std::exception&) {
    fail(ErrorKind::validation, "invalid port in --bind \"" + bind + "\"");
  }
}

struct Server::Impl {
  explicit Impl(Options o) : options(std::move(o)) {
    if (!options.clock) options.clock = steady_clock();
    routes();
  }

  Options options;
  httplib::Server http;
  std::thread worker;
  std::atomic<bool> stopping{false};
  int bound_port = -1;

  std::shared_mutex registry_mu;
  std::map<std::string, std::shared_ptr<ApiSession>> sessions;
  std::uint64_t next_id = 1;

  std::shared_ptr<ApiSession> find(const std::string& id) {
    std::shared_lock lock(registry_mu);
    const auto it = sessions.find(id);
    if (it == sessions.end()) fail(ErrorKind::not_found, "no session \"" + id + "\"");
    return it->second;
  }

  void persist(const Session& s) {
    if (!options.data_dir) return;
    write_log(log_of(s), *options.data_dir / "sessions" / (s.id() + ".jsonl"));
  }

  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, e.kind(), e.what());
      } catch (const nlohmann::json::exception& e) {
        send_error(res, ErrorKind::schema, e.what());
      }
    };
  }

  static nlohmann::json body_of(const httplib::Request& req) {
    if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) return nlohmann::json::object();
    auto doc = nlohmann::json::parse(req.body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) fail(ErrorKind::schema, "request body must be a JSON object");
    return doc;
  }

  void create(const httplib::Request& req, httplib::Response& res) {
    const auto body = body_of(req);
    const Level level = parse_level(detail::as_string(detail::require(body, "level", "request"), "level"));
    const std::uint64_t seed = body.contains("seed") ? detail::as_uint64(body["seed"], "seed") : fresh_seed();

    std::string id;
    {
      std::unique_lock lock(registry_mu);
      id = "s" + std::to_string(next_id++);
    }
    auto entry = std::make_shared<ApiSession>(new_session(config_for(level), seed, id), options.clock());
    persist(entry->session);
    ojson doc;
    doc["version"] = kApiSchema;
    doc["id"] = id;
    doc["seed"] = seed;
    doc["config"] = to_json(entry->session.config());
    doc["puzzle"] = to_json(entry->session.puzzle());
    doc["state"] = entry->session.snapshot();
    {
      std::unique_lock lock(registry_mu);
      sessions.emplace(id, entry);
    }
    send_json(res, doc, 201);
  }

  void post_event(const httplib::Request& req, httplib::Response& res) {
    auto entry = find(req.matches[1]);
    auto body = body_of(req);

    std::unique_lock lock(entry->mu);
    Session& s = entry->session;
    if (s.completed()) fail(ErrorKind::conflict, "session " + s.id() + " is completed");
    const double t = std::round((options.clock() - entry->started_at) * 1000.0) / 1000.0;
    body["timestamp"] = std::max(t, s.last_timestamp());
    const GestureEvent event = event_from_json(body);

    const ScoreBreakdown before = s.live_score();
    const Outcome outcome = s.apply(event);
    const std::size_t index = s.event_log().size() - 1;

    ojson doc;
    doc["version"] = kApiSchema;
    doc["id"] = s.id();
    doc["seq"] = index;
    doc["event"] = to_json(s.event_log().back());
    doc["outcome"] = {{"accepted", outcome.accepted}, {"effect", std::string(to_string(outcome.effect))}};
    doc["score_so_far"] = to_json(outcome.score_so_far);
    doc["score_delta"] = score_delta(before, outcome.score_so_far);
    doc["completed"] = outcome.completed;
    if (s.config().level == Level::guidance && !s.completed()) doc["hint"] = hint_json(s.hint());

    entry->messages.push_back("id: " + std::to_string(index) + "\nevent: event\ndata: " + doc.dump() + "\n\n");
    persist(s);
    lock.unlock();
    entry->cv.notify_all();
    send_json(res, doc);
  }

  void stream(const httplib::Request& req, httplib::Response& res) {
    auto entry = find(req.matches[1]);
    std::size_t next = 0;
    if (req.has_param("from")) {
      const auto from = req.get_param_value("from");
      try {
        next = std::stoul(from);
      } catch (const std::exception&) {
        fail(ErrorKind::validation, "invalid from=\"" + from + "\"");
      }
    }
    {
      std::lock_guard lock(entry->mu);
      ++entry->subscribers;
    }
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream",
        [this, entry, next](std::size_t, httplib::DataSink& sink) mutable {
          std::unique_lock lock(entry->mu);
          entry->cv.wait_for(lock, std::chrono::milliseconds(100), [&] {
            return next < entry->messages.size() || entry->session.completed() || stopping.load();
          });
          while (next < entry->messages.size()) {
            const std::string frame = entry->messages[next++];
            lock.unlock();
            if (!sink.write(frame.data(), frame.size())) return false;
            lock.lock();
          }
          if (entry->session.completed() || stopping.load()) {
            lock.unlock();
            sink.done();
            return true;
          }
          return sink.is_writable();
        },
        [entry](bool) {
          std::lock_guard lock(entry->mu);
          --entry->subscribers;
        });
  }

  void routes() {
    http.Get("/healthz", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::shared_lock lock(registry_mu);
      send_json(res, {{"version", kApiSchema}, {"status", "ok"}, {"sessions", sessions.size()}});
    }));
    http.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) { create(req, res); }));
    http.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto entry = find(req.matches[1]);
      std::lock_guard lock(entry->mu);
      ojson doc;
      doc["version"] = kApiSchema;
      doc["subscribers"] = entry->subscribers;
      doc["state"] = entry->session.snapshot();
      send_json(res, doc);
    }));
    http.Post(R"(/sessions/([^/]+)/events)",
              guarded([this](const httplib::Request& req, httplib::Response& res) { post_event(req, res); }));
    http.Get(R"(/sessions/([^/]+)/score)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto entry = find(req.matches[1]);
      std::lock_guard lock(entry->mu);
      ojson doc;
      doc["version"] = kApiSchema;
      doc["id"] = entry->session.id();
      doc["completed"] = entry->session.completed();
      doc["score"] = to_json(entry->session.live_score());
      send_json(res, doc);
    }));
    http.Get(R"(/sessions/([^/]+)/hint)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto entry = find(req.matches[1]);
      std::lock_guard lock(entry->mu);
      send_json(res, {{"version", kApiSchema}, {"hint", hint_json(entry->session.hint())}});
    }));
    http.Get(R"(/sessions/([^/]+)/log)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto entry = find(req.matches[1]);
      std::lock_guard lock(entry->mu);
      res.set_content(format_log(log_of(entry->session)), "application/x-ndjson");
    }));
    http.Get(R"(/sessions/([^/]+)/stream)",
             guarded([this](const httplib::Request& req, httplib::Response& res) { stream(req, res); }));
  }

  void shutdown() {
    stopping = true;
    {
      std::shared_lock lock(registry_mu);
      for (auto& [id, entry] : sessions) entry->cv.notify_all();
    }
    http.stop();
    if (worker.joinable()) worker.join();
  }
};

Server::Server(Options options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Server::~Server() { stop(); }

int Server::bind() {
  if (impl_->bound_port >= 0) return impl_->bound_port;
  int port = impl_->options.port;
  if (port == 0) {
    port = impl_->http.bind_to_any_port(impl_->options.host);
  } else if (!impl_->http.bind_to_port(impl_->options.host, port)) {
    port = -1;
  }
  if (port < 0) {
    fail(ErrorKind::io, "cannot bind " + impl_->options.host + ":" + std::to_string(impl_->options.port));
  }
  impl_->bound_port = port;
  return port;
}

void Server::run() {
  bind();
  impl_->http.listen_after_bind();
}

int Server::start() {
  const int port = bind();
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return port;
}

void Server::stop() {
  if (impl_) impl_->shutdown();
}

int Server::port() const noexcept { return impl_->bound_port; }

}  // namespace trymove::service
