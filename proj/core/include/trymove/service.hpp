#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace trymove::service {

inline constexpr const char* kApiSchema = "trymove-api/1";
inline constexpr const char* kDefaultHost = "127.0.0.1";
inline constexpr int kDefaultPort = 7463;

// Monotonic seconds. Session time is arrival minus creation, rounded to ms.
using Clock = std::function<double()>;

Clock steady_clock();

struct Options {
  std::string host = kDefaultHost;
  int port = kDefaultPort;  // 0 picks a free port
  std::optional<std::filesystem::path> data_dir;  // logs written through to <dir>/sessions/<id>.jsonl
  Clock clock;  // defaults to steady_clock()
};

// Parses "host:port", "host" or ":port".
void apply_bind(Options& options, const std::string& bind);

// HTTP server with server-sent events on /sessions/{id}/stream.
class Server {
 public:
  explicit Server(Options options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the socket; returns the bound port. Throws Error(io) on failure.
  int bind();
  // Serves until stop(); bind() is called first if needed.
  void run();
  // bind() then serve on a background thread.
  int start();
  void stop();

  int port() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace trymove::service
