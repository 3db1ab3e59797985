#include "dyad/service.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <httplib.h>

#include "dyad/json_io.hpp"

namespace dyad {

namespace {

using nlohmann::json;

Response reply(int status, const json& body) { return Response{status, body.dump()}; }

Response error_reply(int status, std::string_view code, std::string_view message,
                     const std::optional<Violation>& violation = std::nullopt) {
  json body{{"error", code}, {"message", message}};
  // The short reason is the message up to its first colon.
  const auto colon = message.find(':');
  body["reason"] = std::string(message.substr(0, colon));
  if (violation) body["violation"] = io::to_json(*violation);
  return reply(status, body);
}

Response from_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::invalid_argument:
      return error_reply(422, to_string(e.code()), e.what(), e.violation());
    case ErrorCode::precondition:
      return error_reply(422, to_string(e.code()), e.what(), e.violation());
    case ErrorCode::illegal_move:
    case ErrorCode::out_of_turn:
      return error_reply(409, to_string(e.code()), e.what(), e.violation());
    case ErrorCode::budget_exceeded:
      return error_reply(503, to_string(e.code()), e.what());
    case ErrorCode::internal:
      break;
  }
  return error_reply(500, to_string(e.code()), e.what());
}

std::vector<std::string_view> split_path(std::string_view path) {
  if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    while (!path.empty() && path.front() == '/') path.remove_prefix(1);
    const auto slash = path.find('/');
    const auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    path = slash == std::string_view::npos ? std::string_view{} : path.substr(slash);
  }
  return parts;
}

json body_json(std::string_view body) {
  if (body.empty()) return json::object();
  return io::parse(body);
}

json field_or_throw(const json& v, const char* name) {
  if (!v.is_object() || !v.contains(name)) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed JSON: missing field \"") + name + "\"");
  }
  return v.at(name);
}

}  // namespace

std::size_t Service::size() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    const auto parts = split_path(path);
    if (parts.size() == 1 && parts[0] == "health") {
      if (method != "GET") return error_reply(405, "method_not_allowed", "use GET");
      return reply(200, json{{"status", "ok"}, {"games", size()}});
    }
    if (parts.empty() || parts[0] != "games") return error_reply(404, "not_found", "no such route");
    if (parts.size() == 1) {
      if (method != "POST") return error_reply(405, "method_not_allowed", "use POST");
      return create(body);
    }
    const std::string id(parts[1]);
    if (parts.size() == 2) {
      if (method != "GET") return error_reply(405, "method_not_allowed", "use GET");
      return get(id);
    }
    if (parts.size() != 3) return error_reply(404, "not_found", "no such route");
    const auto action = parts[2];
    if (action == "hint") {
      if (method != "GET") return error_reply(405, "method_not_allowed", "use GET");
      return hint(id);
    }
    if (action != "moves" && action != "colourings" && action != "concede") {
      return error_reply(404, "not_found", "no such route");
    }
    if (method != "POST") return error_reply(405, "method_not_allowed", "use POST");
    if (!find(id)) return error_reply(404, "not_found", "unknown game id " + id);
    const json req = body_json(body);
    if (action == "moves") {
      const json added = field_or_throw(req, "added");
      return mutate(id, [&](const GameState& s) {
        return apply_move_A(s, MoveA{io::interval_set_from_json(added, s.config().j)});
      });
    }
    if (action == "colourings") {
      const auto assignments = io::assignments_from_json(field_or_throw(req, "assignments"));
      return mutate(id, [&](const GameState& s) { return submit_colouring_B(s, assignments); });
    }
    const json seat = field_or_throw(req, "seat");
    const auto who = seat.is_string() ? parse_player(seat.get<std::string>()) : std::nullopt;
    if (!who) throw Error(ErrorCode::invalid_argument, "malformed JSON: \"seat\" must be \"A\" or \"B\"");
    return mutate(id, [&](const GameState& s) { return concede(s, *who); });
  } catch (const Error& e) {
    return from_error(e);
  } catch (const std::exception& e) {
    return error_reply(500, "internal", e.what());
  }
}

Response Service::create(std::string_view body) {
  const json req = body_json(body);
  const json cfg_json = req.contains("config") ? req.at("config") : req;
  GameState state = advance_engines(new_game(io::game_config_from_json(cfg_json)));
  auto session = std::make_shared<Session>();
  session->state = std::move(state);
  session->created = std::chrono::system_clock::now();
  const std::string id = "g" + std::to_string(next_id_.fetch_add(1));
  json out{{"id", id}, {"state", io::to_json(session->state)}};
  {
    std::unique_lock lock(mu_);
    sessions_[id] = std::move(session);
  }
  return reply(201, out);
}

Response Service::get(const std::string& id) const {
  auto session = find(id);
  if (!session) return error_reply(404, "not_found", "unknown game id " + id);
  std::shared_lock lock(session->mu);
  return reply(200, io::to_json(session->state));
}

Response Service::mutate(const std::string& id, const std::function<GameState(const GameState&)>& op) {
  auto session = find(id);
  if (!session) return error_reply(404, "not_found", "unknown game id " + id);
  std::lock_guard lock(session->mu);
  // Engine seats move inside the same critical section, so a client never
  // observes a state where an engine owes a move.
  GameState next = advance_engines(op(session->state));
  session->state = std::move(next);
  return reply(200, io::to_json(session->state));
}

Response Service::hint(const std::string& id) const {
  auto session = find(id);
  if (!session) return error_reply(404, "not_found", "unknown game id " + id);
  std::shared_lock lock(session->mu);
  const auto move = session->state.status() == GameStatus::awaiting_A ? hint_A(session->state) : std::nullopt;
  return reply(200, json{{"move", move ? json{{"added", io::intervals_to_json(move->added)}} : json(nullptr)}});
}

json Service::snapshot() const {
  std::vector<std::pair<std::string, std::shared_ptr<Session>>> all;
  {
    std::shared_lock lock(mu_);
    all.assign(sessions_.begin(), sessions_.end());
  }
  json games = json::object();
  for (const auto& [id, session] : all) {
    std::shared_lock lock(session->mu);
    games[id] = json{{"config", io::to_json(session->state.config())},
                     {"transcript", io::to_json(transcript(session->state))},
                     {"created", std::chrono::duration_cast<std::chrono::seconds>(
                                     session->created.time_since_epoch())
                                     .count()}};
  }
  return json{{"games", games}};
}

void Service::restore(const json& snap) {
  if (!snap.is_object() || !snap.contains("games") || !snap.at("games").is_object()) {
    throw Error(ErrorCode::invalid_argument, "malformed JSON: snapshot needs a \"games\" object");
  }
  for (const auto& [id, game] : snap.at("games").items()) {
    const GameConfig cfg = io::game_config_from_json(field_or_throw(game, "config"));
    auto session = std::make_shared<Session>();
    session->state = replay(cfg, io::transcript_from_json(field_or_throw(game, "transcript"), cfg.j));
    session->created = std::chrono::system_clock::time_point(
        std::chrono::seconds(game.value("created", std::int64_t{0})));
    std::unique_lock lock(mu_);
    sessions_[id] = std::move(session);
    // Keep fresh ids clear of restored ones.
    if (id.size() > 1 && id[0] == 'g') {
      try {
        const auto n = std::stoull(id.substr(1));
        if (n >= next_id_.load()) next_id_.store(n + 1);
      } catch (const std::exception&) {
      }
    }
  }
}

struct HttpServer::Impl {
  Service& service;
  ServeOptions options;
  httplib::Server server;
  int port = -1;

  Impl(Service& s, ServeOptions o) : service(s), options(std::move(o)) {
    server.set_default_headers({{"Access-Control-Allow-Origin", options.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
      const Response r = service.handle(req.method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server.Get(R"(/.*)", route);
    server.Post(R"(/.*)", route);
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }
};

HttpServer::HttpServer(Service& service, ServeOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& o = impl_->options;
  if (o.snapshot_path && std::filesystem::exists(*o.snapshot_path)) {
    std::ifstream in(*o.snapshot_path);
    std::stringstream buf;
    buf << in.rdbuf();
    impl_->service.restore(io::parse(buf.str()));
  }
  impl_->port = o.port == 0 ? impl_->server.bind_to_any_port(o.host)
                            : (impl_->server.bind_to_port(o.host, o.port) ? o.port : -1);
  if (impl_->port < 0) {
    throw Error(ErrorCode::invalid_argument, "cannot bind " + o.host + ":" + std::to_string(o.port));
  }
  return impl_->port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::shutdown() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::stop() {
  if (!impl_) return;
  shutdown();
  if (impl_->options.snapshot_path && impl_->port >= 0) {
    std::ofstream out(*impl_->options.snapshot_path);
    out << impl_->service.snapshot().dump(2) << '\n';
    impl_->port = -1;
  }
}

namespace {
HttpServer* g_server = nullptr;
extern "C" void on_signal(int) {
  if (g_server) g_server->shutdown();
}
}  // namespace

int serve(const ServeOptions& options, const std::function<void(int port)>& on_ready) {
  Service service;
  HttpServer server(service, options);
  int port = 0;
  try {
    port = server.bind();
  } catch (const Error& e) {
    std::cerr << "dyad serve: " << e.what() << '\n';
    return 2;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  if (on_ready) on_ready(port);
  server.run();
  server.stop();
  g_server = nullptr;
  return 0;
}

}  // namespace dyad
