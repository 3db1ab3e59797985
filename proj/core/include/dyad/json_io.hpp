#pragma once

// Wire format shared by the CLI and the HTTP service.
//
//   interval    {"level": j, "index": k}            (+ "colour": i when coloured)
//   collection  {"j": j, "d": d, "eta": {"num": p, "den": q}, "intervals": [...]}
//
// Parsing failures raise Error(invalid_argument).

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "dyad/adversary.hpp"
#include "dyad/colourer.hpp"
#include "dyad/dyadic.hpp"
#include "dyad/error.hpp"
#include "dyad/game.hpp"
#include "dyad/oracle.hpp"

namespace dyad::io {

using nlohmann::json;

/// A parsed collection: coloured members carry their colour, the rest are blank.
struct Collection {
  int j = 0;
  int d = 1;
  std::optional<Rational> eta;
  Colouring colouring{IntervalSet(0), 1};

  /// eta (default 1/2) and d.
  [[nodiscard]] HomogeneityParams params() const;
};

[[nodiscard]] json to_json(DyadicInterval I);
[[nodiscard]] DyadicInterval interval_from_json(const json& v);
[[nodiscard]] json to_json(const Rational& r);
[[nodiscard]] Rational rational_from_json(const json& v);

/// Members of a colouring, with "colour" on the coloured ones.
[[nodiscard]] json intervals_to_json(const Colouring& col);
[[nodiscard]] json intervals_to_json(const IntervalSet& set);
/// Reads a list of intervals that must all sit on `level`.
[[nodiscard]] IntervalSet interval_set_from_json(const json& v, int level);

[[nodiscard]] json collection_to_json(const Colouring& col, const std::optional<Rational>& eta);
[[nodiscard]] Collection collection_from_json(const json& v);

[[nodiscard]] json to_json(const Violation& v);
[[nodiscard]] Violation violation_from_json(const json& v);

[[nodiscard]] json to_json(const ExtensionReport& r, const std::optional<Rational>& eta);

[[nodiscard]] json to_json(const ChainSpec& s);
[[nodiscard]] ChainSpec chain_spec_from_json(const json& v);
[[nodiscard]] json to_json(const StageFamily& fam);
[[nodiscard]] json to_json(const CounterexampleReport& r);

[[nodiscard]] GameConfig game_config_from_json(const json& v);
[[nodiscard]] json to_json(const GameConfig& cfg);
/// Snapshot for clients: board, status, whose turn, last violation, history.
[[nodiscard]] json to_json(const GameState& state);
[[nodiscard]] json to_json(const std::vector<TranscriptEntry>& entries);
[[nodiscard]] std::vector<TranscriptEntry> transcript_from_json(const json& v, int level);
/// [{"level", "index", "colour"}] -> pairs, for human colour submissions.
[[nodiscard]] std::vector<std::pair<DyadicInterval, int>> assignments_from_json(const json& v);

/// Parses text, mapping syntax errors to Error(invalid_argument).
[[nodiscard]] json parse(std::string_view text);

}  // namespace dyad::io
