#include <gtest/gtest.h>

#include <filesystem>
#include <thread>

#include <httplib.h>

#include "dyad/json_io.hpp"
#include "dyad/service.hpp"

using namespace dyad;
using nlohmann::json;

namespace {

json body(const Response& r) { return json::parse(r.body); }

json chain_config(int a, int n, bool restricted = false) {
  return json{{"preset", {{"kind", "counterexample"}, {"a", a}, {"n", n}, {"j", n + a + 1}}},
              {"restricted", restricted}};
}

std::string create(Service& svc, const json& cfg) {
  auto r = svc.handle("POST", "/games", cfg.dump());
  EXPECT_EQ(r.status, 201) << r.body;
  return body(r).at("id").get<std::string>();
}

json added(const json& hint) { return json{{"added", hint.at("move").at("added")}}; }

}  // namespace

TEST(Service, Health) {
  Service svc;
  auto r = svc.handle("GET", "/health", "");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(body(r).at("status"), "ok");
}

TEST(Service, ScriptedChainGameEndsInAWin) {
  for (int n : {2, 3}) {
    Service svc;
    const auto id = create(svc, chain_config(1, n));
    for (int k = 1; k <= n; ++k) {
      auto hint = svc.handle("GET", "/games/" + id + "/hint", "");
      ASSERT_EQ(hint.status, 200);
      auto r = svc.handle("POST", "/games/" + id + "/moves", added(body(hint)).dump());
      ASSERT_EQ(r.status, 200) << r.body;
    }
    auto final_state = body(svc.handle("GET", "/games/" + id, ""));
    EXPECT_EQ(final_state.at("status"), "A_wins");
    EXPECT_EQ(final_state.at("stage"), n);
    EXPECT_EQ(final_state.at("to_move"), nullptr);
    EXPECT_FALSE(final_state.at("violation").is_null());
    EXPECT_EQ(body(svc.handle("GET", "/games/" + id + "/hint", "")).at("move"), nullptr);
  }
}

TEST(Service, IllegalMoves) {
  Service svc;
  const auto id = create(svc, chain_config(1, 2));
  auto r = svc.handle("POST", "/games/" + id + "/moves", R"({"added":[{"level":4,"index":0}]})");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(body(r).at("reason"), "not a strict superset");
  r = svc.handle("POST", "/games/" + id + "/moves", R"({"added":[]})");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(body(r).at("reason"), "not a strict superset");

  const auto rid = create(svc, chain_config(1, 2, true));
  r = svc.handle("POST", "/games/" + rid + "/moves", R"({"added":[{"level":4,"index":4}]})");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(body(r).at("violation").at("kind"), "PREVIS");
  // Rejected moves leave the state alone.
  EXPECT_EQ(body(svc.handle("GET", "/games/" + rid, "")).at("status"), "awaiting_A");
}

TEST(Service, ErrorStatuses) {
  Service svc;
  EXPECT_EQ(svc.handle("GET", "/games/nope", "").status, 404);
  EXPECT_EQ(svc.handle("POST", "/games/nope/moves", "{}").status, 404);
  EXPECT_EQ(svc.handle("GET", "/elsewhere", "").status, 404);
  EXPECT_EQ(svc.handle("POST", "/games", "{not json").status, 422);
  EXPECT_EQ(svc.handle("POST", "/games", R"({"j":2,"d":2,"initial":[{"level":2,"index":0,"colour":1},{"level":2,"index":1,"colour":1}]})").status, 422);
  const auto id = create(svc, chain_config(1, 2));
  EXPECT_EQ(svc.handle("POST", "/games/" + id + "/moves", R"({"wrong":1})").status, 422);
  EXPECT_EQ(svc.handle("POST", "/games/" + id + "/colourings", R"({"assignments":[]})").status, 409);
  EXPECT_EQ(svc.handle("DELETE", "/games/" + id, "").status, 405);

  json tight = chain_config(1, 2);
  tight["budget"] = 1;
  const auto tid = create(svc, tight);
  auto r = svc.handle("POST", "/games/" + tid + "/moves", R"({"added":[{"level":4,"index":4}]})");
  EXPECT_EQ(r.status, 503) << r.body;
  EXPECT_EQ(body(svc.handle("GET", "/games/" + tid, "")).at("status"), "awaiting_A");
}

TEST(Service, HumanBAndConcede) {
  Service svc;
  const auto id = create(svc, json{{"j", 2}, {"d", 2}, {"seats", {{"A", "human"}, {"B", "human"}}},
                                   {"initial", json::array({{{"level", 2}, {"index", 0}, {"colour", 1}}})}});
  auto r = svc.handle("POST", "/games/" + id + "/moves", R"({"added":[{"level":2,"index":1}]})");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(body(r).at("status"), "awaiting_B");
  EXPECT_EQ(body(r).at("pending").size(), 1u);
  r = svc.handle("POST", "/games/" + id + "/colourings", R"({"assignments":[{"level":2,"index":1,"colour":1}]})");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(body(r).at("violation").at("kind"), "HOM1");
  r = svc.handle("POST", "/games/" + id + "/colourings", R"({"assignments":[{"level":2,"index":1,"colour":2}]})");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(body(r).at("status"), "awaiting_A");
  EXPECT_EQ(svc.handle("POST", "/games/" + id + "/concede", R"({"seat":"B"})").status, 409);
  EXPECT_EQ(svc.handle("POST", "/games/" + id + "/concede", R"({"seat":"C"})").status, 422);
  r = svc.handle("POST", "/games/" + id + "/concede", R"({"seat":"A"})");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(body(r).at("status"), "B_wins");
  EXPECT_EQ(body(r).at("conceded_by"), "A");
}

TEST(Service, ReplayThroughApiIsByteIdentical) {
  Service svc;
  const auto first = create(svc, chain_config(1, 3));
  const auto second = create(svc, chain_config(1, 3));
  std::vector<std::string> moves;
  for (int k = 0; k < 3; ++k) {
    auto hint = body(svc.handle("GET", "/games/" + first + "/hint", ""));
    moves.push_back(added(hint).dump());
    ASSERT_EQ(svc.handle("POST", "/games/" + first + "/moves", moves.back()).status, 200);
  }
  for (const auto& m : moves) ASSERT_EQ(svc.handle("POST", "/games/" + second + "/moves", m).status, 200);
  EXPECT_EQ(svc.handle("GET", "/games/" + first, "").body, svc.handle("GET", "/games/" + second, "").body);
  EXPECT_EQ(svc.handle("GET", "/games/" + first, "").body, svc.handle("GET", "/games/" + first, "").body);
}

TEST(Service, SnapshotRestore) {
  Service svc;
  const auto a = create(svc, chain_config(1, 2));
  ASSERT_EQ(svc.handle("POST", "/games/" + a + "/moves", R"({"added":[{"level":4,"index":4}]})").status, 200);
  const auto b = create(svc, json{{"j", 2}, {"d", 2}, {"seats", {{"B", "human"}}}});
  ASSERT_EQ(svc.handle("POST", "/games/" + b + "/moves", R"({"added":[{"level":2,"index":1}]})").status, 200);

  Service restored;
  restored.restore(svc.snapshot());
  EXPECT_EQ(restored.size(), 2u);
  for (const auto& id : {a, b}) {
    EXPECT_EQ(restored.handle("GET", "/games/" + id, "").body, svc.handle("GET", "/games/" + id, "").body);
  }
  // Fresh ids do not collide with restored ones.
  const auto c = create(restored, chain_config(1, 2));
  EXPECT_NE(c, a);
  EXPECT_NE(c, b);
}

TEST(Service, ConcurrentGames) {
  Service svc;
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i) ids.push_back(create(svc, chain_config(1, 2)));
  std::vector<std::thread> threads;
  for (const auto& id : ids) {
    threads.emplace_back([&svc, id] {
      for (int k = 0; k < 2; ++k) {
        auto hint = body(svc.handle("GET", "/games/" + id + "/hint", ""));
        (void)svc.handle("POST", "/games/" + id + "/moves", added(hint).dump());
        (void)svc.handle("GET", "/games/" + id, "");
      }
    });
  }
  // Hammer one game from several threads: exactly one move per stage wins.
  const auto shared = create(svc, chain_config(1, 2));
  std::atomic<int> accepted{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      auto r = svc.handle("POST", "/games/" + shared + "/moves", R"({"added":[{"level":4,"index":4}]})");
      if (r.status == 200) ++accepted;
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& id : ids) EXPECT_EQ(body(svc.handle("GET", "/games/" + id, "")).at("status"), "A_wins");
  EXPECT_EQ(accepted.load(), 1);
  EXPECT_EQ(body(svc.handle("GET", "/games/" + shared, "")).at("stage"), 2);
}

TEST(Service, LocalhostRoundTrip) {
  Service svc;
  ServeOptions opts;
  opts.port = 0;
  const auto snap = std::filesystem::temp_directory_path() / "dyad_service_snapshot.json";
  std::filesystem::remove(snap);
  opts.snapshot_path = snap;
  HttpServer server(svc, opts);
  const int port = server.bind();
  std::thread loop([&] { server.run(); });

  httplib::Client cli("127.0.0.1", port);
  auto health = cli.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "*");
  auto created = cli.Post("/games", chain_config(1, 2).dump(), "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const auto id = json::parse(created->body).at("id").get<std::string>();
  auto bad = cli.Post("/games/" + id + "/moves", R"({"added":[]})", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 409);
  auto pre = cli.Options("/games");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);

  server.stop();
  loop.join();
  ASSERT_TRUE(std::filesystem::exists(snap));
  Service again;
  HttpServer second(again, opts);
  (void)second.bind();
  EXPECT_EQ(again.size(), 1u);
  second.stop();
  std::filesystem::remove(snap);
}
