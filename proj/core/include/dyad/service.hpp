#pragma once

// HTTP game sessions. Request handling lives in Service::handle and needs no
// socket; HttpServer binds it to a port.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "dyad/game.hpp"

namespace dyad {

inline constexpr int kDefaultPort = 8737;

struct Response {
  int status = 200;
  std::string body;
};

class Service {
 public:
  Service() = default;
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Routes one request. Never throws.
  [[nodiscard]] Response handle(std::string_view method, std::string_view path, std::string_view body);

  [[nodiscard]] std::size_t size() const;

  /// {"games": {id: {"config", "transcript"}}}; enough to rebuild every game.
  [[nodiscard]] nlohmann::json snapshot() const;
  /// Rebuilds sessions from a snapshot, replacing ids that collide.
  void restore(const nlohmann::json& snap);

 private:
  struct Session {
    std::shared_mutex mu;
    GameState state;
    std::chrono::system_clock::time_point created;
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  Response create(std::string_view body);
  Response get(const std::string& id) const;
  Response mutate(const std::string& id, const std::function<GameState(const GameState&)>& op);
  Response hint(const std::string& id) const;

  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<std::uint64_t> next_id_{1};
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = kDefaultPort;  // 0 picks a free port
  std::string cors_origin = "*";
  /// Loaded at start when present, written on stop.
  std::optional<std::filesystem::path> snapshot_path;
};

class HttpServer {
 public:
  HttpServer(Service& service, ServeOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; returns the port. Error(invalid_argument) on failure.
  int bind();
  /// Blocks until shutdown() or stop().
  void run();
  /// Stops listening only.
  void shutdown();
  /// Stops listening and writes the snapshot, if configured.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// bind + run, stopping on SIGINT/SIGTERM. Returns a process exit code.
int serve(const ServeOptions& options, const std::function<void(int port)>& on_ready = {});

}  // namespace dyad
