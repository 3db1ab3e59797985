#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dyad/json_io.hpp"

using namespace dyad;
namespace fs = std::filesystem;

namespace {

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kCollections[] = {"mod2_colouring.json", "inhomogeneous.json", "previsible.json",
                              "nonprevisible.json",  "split_halves.json",  "split_halves_merged.json",
                              "final_stage.json",    "blank_stage0.json"};

}  // namespace

TEST(JsonIo, CollectionRoundTripOnFixtures) {
  for (const char* name : kCollections) {
    const auto first = io::collection_from_json(io::parse(read(fs::path(DYAD_FIXTURES) / name)));
    const auto text = io::collection_to_json(first.colouring, first.eta).dump();
    const auto second = io::collection_from_json(io::parse(text));
    EXPECT_EQ(second.colouring, first.colouring) << name;
    EXPECT_EQ(second.eta, first.eta) << name;
    EXPECT_EQ(io::collection_to_json(second.colouring, second.eta).dump(), text) << name;
  }
}

TEST(JsonIo, FieldNames) {
  Colouring col(IntervalSet(2, {1, 3}), 2, {2, kUncoloured});
  const auto v = io::collection_to_json(col, Rational(1, 3));
  EXPECT_EQ(v.at("j"), 2);
  EXPECT_EQ(v.at("d"), 2);
  EXPECT_EQ(v.at("eta").at("num"), 1);
  EXPECT_EQ(v.at("eta").at("den"), 3);
  EXPECT_EQ(v.at("intervals").at(0).at("colour"), 2);
  EXPECT_FALSE(v.at("intervals").at(1).contains("colour"));
}

TEST(JsonIo, UnsortedInputKeepsColours) {
  auto c = io::collection_from_json(io::parse(
      R"({"j":3,"d":2,"intervals":[{"level":3,"index":5,"colour":2},{"level":3,"index":1,"colour":1}]})"));
  EXPECT_EQ(c.colouring.colour_of({3, 1}), 1);
  EXPECT_EQ(c.colouring.colour_of({3, 5}), 2);
  EXPECT_EQ(c.params().eta(), Rational(1, 2));
}

TEST(JsonIo, MalformedInputs) {
  auto bad = [](const char* text) {
    try {
      (void)io::collection_from_json(io::parse(text));
    } catch (const Error& e) {
      return e.code() == ErrorCode::invalid_argument;
    }
    return false;
  };
  EXPECT_TRUE(bad(R"({"j":3)"));
  EXPECT_TRUE(bad(R"({"d":2,"intervals":[]})"));
  EXPECT_TRUE(bad(R"({"j":3,"d":2,"intervals":{}})"));
  EXPECT_TRUE(bad(R"({"j":3,"d":2,"intervals":[{"level":3}]})"));
  EXPECT_TRUE(bad(R"({"j":3,"d":2,"intervals":[{"level":3,"index":9}]})"));
  EXPECT_TRUE(bad(R"({"j":3,"d":2,"intervals":[{"level":3,"index":1},{"level":3,"index":1}]})"));
  EXPECT_TRUE(bad(R"({"j":3,"d":2,"intervals":[{"level":3,"index":"x"}]})"));
  EXPECT_TRUE(bad(R"({"j":3,"d":0,"intervals":[]})"));
  EXPECT_TRUE(bad(R"({"j":3,"d":2,"eta":{"num":0,"den":1},"intervals":[]})"));
}

TEST(JsonIo, ViolationRoundTrip) {
  Violation h1{};
  h1.kind = ViolationKind::hom1;
  h1.testing_interval = {2, 1};
  h1.colour = 3;
  h1.count = 2;
  Violation h2{};
  h2.kind = ViolationKind::hom2;
  h2.testing_interval = {0, 0};
  h2.max_count = 3;
  h2.min_count = 1;
  h2.argmax_colour = 1;
  h2.argmin_colour = 2;
  Violation pv{};
  pv.kind = ViolationKind::previs;
  pv.testing_interval = {1, 1};
  pv.heavy_child = {2, 3};
  for (const auto& v : {h1, h2, pv}) EXPECT_EQ(io::violation_from_json(io::to_json(v)), v);
  EXPECT_EQ(io::to_json(pv).at("detail").at("heavy_side"), "right");
}

TEST(JsonIo, GameConfigAndTranscriptRoundTrip) {
  const auto cfg = io::game_config_from_json(io::parse(read(fs::path(DYAD_FIXTURES) / "game_chain.json")));
  ASSERT_TRUE(cfg.script);
  EXPECT_EQ(cfg.j, 4);
  EXPECT_EQ(cfg.params.d(), 2);
  const auto again = io::game_config_from_json(io::to_json(cfg));
  EXPECT_EQ(io::to_json(again).dump(), io::to_json(cfg).dump());

  auto state = advance_engines([&] {
    auto c = cfg;
    c.seat_A = Seat::engine;
    return new_game(c);
  }());
  const auto entries = transcript(state);
  EXPECT_EQ(io::transcript_from_json(io::to_json(entries), cfg.j), entries);
}

TEST(JsonIo, BlankGameConfig) {
  const auto cfg = io::game_config_from_json(io::parse(read(fs::path(DYAD_FIXTURES) / "game_blank.json")));
  EXPECT_TRUE(cfg.restricted);
  EXPECT_EQ(cfg.initial.base().size(), 2u);
  EXPECT_FALSE(cfg.script);
  EXPECT_THROW((void)io::game_config_from_json(io::parse(R"({"j":3,"d":2,"seats":{"A":"robot"}})")), Error);
}
