#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "trymove/engine.hpp"
#include "trymove/error.hpp"
#include "trymove/service.hpp"
#include "trymove/sessionio.hpp"

using namespace trymove;
using nlohmann::json;

namespace {

struct Fixture {
  std::atomic<double> now{100.0};
  std::unique_ptr<service::Server> server;
  std::unique_ptr<httplib::Client> client;

  explicit Fixture(std::optional<std::filesystem::path> data_dir = {}) {
    service::Options opts;
    opts.port = 0;
    opts.data_dir = data_dir;
    opts.clock = [this] { return now.load(); };
    server = std::make_unique<service::Server>(opts);
    const int port = server->start();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
    client->set_read_timeout(10, 0);
  }

  json post(const std::string& path, const json& body, int expect) {
    auto res = client->Post(path, body.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expect);
    return json::parse(res->body);
  }

  json get(const std::string& path, int expect = 200) {
    auto res = client->Get(path);
    REQUIRE(res);
    CHECK(res->status == expect);
    return json::parse(res->body);
  }

  // Posts the solver script with the clock set to each scripted timestamp.
  json play_solution(const std::string& id, Level level, std::uint64_t seed) {
    json last;
    for (const auto& e : solve(config_for(level), seed)) {
      now = 100.0 + e.timestamp;
      json body = to_json(e);
      body.erase("timestamp");
      last = post("/sessions/" + id + "/events", body, 200);
    }
    return last;
  }
};

}  // namespace

TEST_CASE("bind parsing") {
  service::Options o;
  service::apply_bind(o, "0.0.0.0:8080");
  CHECK(o.host == "0.0.0.0");
  CHECK(o.port == 8080);
  service::apply_bind(o, ":9000");
  CHECK(o.host == "0.0.0.0");
  CHECK(o.port == 9000);
  CHECK_THROWS_AS(service::apply_bind(o, "localhost:http"), Error);
  CHECK(service::Options{}.port == 7463);
  CHECK(service::Options{}.host == "127.0.0.1");
}

TEST_CASE("health and session creation") {
  Fixture fx;
  const auto health = fx.get("/healthz");
  CHECK(health["status"] == "ok");
  CHECK(health["version"] == "trymove-api/1");

  const auto a = fx.post("/sessions", {{"level", "guidance"}, {"seed", 1}}, 201);
  CHECK(a["version"] == "trymove-api/1");
  CHECK(a["puzzle"]["size"] == 2);
  CHECK(a["config"]["frame_budget"] == 50);
  CHECK(a["seed"] == 1);
  for (const auto& c : a["state"]["counts"]) CHECK(c == 0);

  const auto b = fx.post("/sessions", {{"level", "guidance"}, {"seed", 1}}, 201);
  CHECK(a["puzzle"] == b["puzzle"]);
  CHECK(a["id"] != b["id"]);

  const auto fresh = fx.post("/sessions", {{"level", "easy"}}, 201);
  CHECK(fresh["seed"].is_number_unsigned());

  const auto bad = fx.post("/sessions", {{"level", "hardest"}}, 400);
  const std::string msg = bad["error"]["message"];
  CHECK(msg.find("guidance, easy, middle, difficult") != std::string::npos);
  fx.post("/sessions", json::object(), 400);

  const auto state = fx.get("/sessions/" + a["id"].get<std::string>());
  CHECK(state["state"]["puzzle"] == a["puzzle"]);
  fx.get("/sessions/nope", 404);
  fx.get("/sessions/nope/score", 404);
  fx.post("/sessions/nope/events", {{"class", "g1"}}, 404);
}

TEST_CASE("events, hints, completion and conflicts") {
  Fixture fx;
  const std::string id = fx.post("/sessions", {{"level", "guidance"}, {"seed", 1}}, 201)["id"];
  fx.now = 101.2344;
  const auto first = fx.post("/sessions/" + id + "/events", {{"class", "ga"}, {"target_piece", 1}}, 200);
  CHECK(first["outcome"]["effect"] == "selected");
  CHECK(first["score_so_far"]["gesture_sum"] == 1);
  CHECK(first["event"]["timestamp"] == 1.234);
  CHECK(first["hint"]["piece_id"] == 1);
  CHECK(first["completed"] == false);

  fx.post("/sessions/" + id + "/events", {{"class", "g0"}}, 400);
  fx.post("/sessions/" + id + "/events", {{"class", "ga"}, {"target_piece", 42}}, 400);

  const std::string id2 = fx.post("/sessions", {{"level", "guidance"}, {"seed", 1}}, 201)["id"];
  const auto last = fx.play_solution(id2, Level::guidance, 1);
  CHECK(last["completed"] == true);
  CHECK(last["outcome"]["effect"] == "placed");
  CHECK_FALSE(last.contains("hint"));
  const auto score = fx.get("/sessions/" + id2 + "/score");
  CHECK(score["completed"] == true);
  CHECK(score["score"] == last["score_so_far"]);
  CHECK(score["score"]["time_bonus"] == 0);
  fx.post("/sessions/" + id2 + "/events", {{"class", "g1"}}, 409);

  const std::string easy = fx.post("/sessions", {{"level", "easy"}, {"seed", 2}}, 201)["id"];
  const auto e = fx.post("/sessions/" + easy + "/events", {{"class", "g1"}}, 200);
  CHECK_FALSE(e.contains("hint"));
  fx.get("/sessions/" + easy + "/hint", 409);
}

TEST_CASE("downloaded log scores like the service") {
  Fixture fx;
  for (const Level level : {Level::easy, Level::difficult}) {
    const std::string id =
        fx.post("/sessions", {{"level", std::string(to_string(level))}, {"seed", 12}}, 201)["id"];
    fx.play_solution(id, level, 12);
    const auto online = fx.get("/sessions/" + id + "/score")["score"];
    auto res = fx.client->Get("/sessions/" + id + "/log");
    REQUIRE(res);
    const auto log = parse_log(res->body);
    const auto offline = score_log(log);
    CHECK(offline.final_score == online["final_score"].get<std::int64_t>());
    CHECK(json::parse(to_json(offline).dump()) == online);
    CHECK(replay(log.config, log.seed, log.events).completed());
  }
}

TEST_CASE("stream delivers one message per event") {
  Fixture fx;
  const std::string id = fx.post("/sessions", {{"level", "guidance"}, {"seed", 3}}, 201)["id"];

  std::string received;
  std::thread subscriber([&] {
    httplib::Client c("127.0.0.1", fx.server->port());
    c.set_read_timeout(10, 0);
    c.Get("/sessions/" + id + "/stream", [&](const char* data, std::size_t n) {
      received.append(data, n);
      return true;
    });
  });
  for (int i = 0; i < 200 && fx.get("/sessions/" + id)["subscribers"] != 1; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  REQUIRE(fx.get("/sessions/" + id)["subscribers"] == 1);

  const auto script = solve(config_for(Level::guidance), 3);
  fx.play_solution(id, Level::guidance, 3);
  subscriber.join();

  std::size_t count = 0;
  std::int64_t expected_seq = 0;
  std::size_t pos = 0;
  while ((pos = received.find("data: ", pos)) != std::string::npos) {
    const auto end = received.find('\n', pos);
    const auto msg = json::parse(received.substr(pos + 6, end - pos - 6));
    CHECK(msg["seq"] == expected_seq++);
    ++count;
    pos = end;
  }
  CHECK(count == script.size());

  // Late subscribers replay from the requested index and close on completion.
  auto res = fx.client->Get("/sessions/" + id + "/stream?from=5");
  REQUIRE(res);
  std::size_t late = 0;
  for (pos = 0; (pos = res->body.find("event: event", pos)) != std::string::npos; ++pos) ++late;
  CHECK(late == script.size() - 5);
}

TEST_CASE("concurrent posts are serialized") {
  Fixture fx;
  const std::string id = fx.post("/sessions", {{"level", "difficult"}, {"seed", 4}}, 201)["id"];
  std::vector<std::thread> workers;
  std::mutex seq_mu;
  std::vector<int> seqs;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      httplib::Client c("127.0.0.1", fx.server->port());
      for (int i = 0; i < 25; ++i) {
        fx.now = fx.now + 0.01;
        auto res = c.Post("/sessions/" + id + "/events", json{{"class", w % 2 ? "g3" : "g4"}}.dump(),
                          "application/json");
        if (res && res->status == 200) {
          std::lock_guard lock(seq_mu);
          seqs.push_back(json::parse(res->body)["seq"]);
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  std::sort(seqs.begin(), seqs.end());
  REQUIRE(seqs.size() == 100);
  for (int i = 0; i < 100; ++i) CHECK(seqs[i] == i);
  const auto state = fx.get("/sessions/" + id)["state"];
  CHECK(state["events"].size() == 100);
  std::int64_t total = 0;
  for (const auto& c : state["counts"]) total += c.get<std::int64_t>();
  CHECK(total == 100);
}

TEST_CASE("logs are written through to the data directory") {
  const auto dir = std::filesystem::temp_directory_path() / "trymove_test_service";
  std::filesystem::remove_all(dir);
  {
    Fixture fx(dir);
    const std::string id = fx.post("/sessions", {{"level", "guidance"}, {"seed", 1}}, 201)["id"];
    fx.play_solution(id, Level::guidance, 1);
    auto res = fx.client->Get("/sessions/" + id + "/log");
    REQUIRE(res);
    const auto file = dir / "sessions" / (id + ".jsonl");
    REQUIRE(std::filesystem::exists(file));
    CHECK(ingest_log(file) == parse_log(res->body));
  }
  std::filesystem::remove_all(dir);
}
