#pragma once

// The two-person game on D_j: Player A keeps enlarging the collection,
// Player B must extend the colouring homogeneously while preserving every
// colour already placed. A wins when no such extension exists; B wins when
// the board is full (or, in the restricted game, when A has no previsible
// move left).

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dyad/adversary.hpp"
#include "dyad/dyadic.hpp"
#include "dyad/error.hpp"
#include "dyad/oracle.hpp"

namespace dyad {

enum class Player { A, B };
enum class Seat { human, engine };
enum class GameStatus { awaiting_A, awaiting_B, A_wins, B_wins, draw };

[[nodiscard]] std::string to_string(Player p);
[[nodiscard]] std::string to_string(Seat s);
[[nodiscard]] std::string to_string(GameStatus s);
[[nodiscard]] std::optional<Player> parse_player(std::string_view s);
[[nodiscard]] std::optional<Seat> parse_seat(std::string_view s);
[[nodiscard]] std::optional<GameStatus> parse_status(std::string_view s);

struct GameConfig {
  HomogeneityParams params{Rational(1, 2), 2};
  int j = 0;
  /// Player A's additions must form a d-previsible pair with the collection.
  bool restricted = false;
  /// Total, homogeneous colouring of C(0).
  Colouring initial{IntervalSet(0), 2};
  Seat seat_A = Seat::human;
  Seat seat_B = Seat::engine;
  /// When set, hint_A replays this chain's moves.
  std::optional<ChainSpec> script;
  /// Node budget for every exhaustive search the engine runs.
  std::uint64_t budget = kDefaultSearchBudget;
  /// Stage cap for the open-ended unrestricted game; 0 means none. A game
  /// still running after this many completed stages is a draw.
  int max_stages = 0;
};

/// The game set up from a chain: C(0) with its convention colouring.
[[nodiscard]] GameConfig counterexample_config(const ChainSpec& spec, bool restricted = false);

struct MoveA {
  IntervalSet added;
};

/// How Player B's colouring of a stage was obtained.
enum class Resolution { initial, extend_colouring, oracle, submitted };

[[nodiscard]] std::string to_string(Resolution r);

struct StageRecord {
  int stage = 0;
  IntervalSet added;
  Colouring colouring;  // total colouring of the whole collection after the stage
  Resolution resolution = Resolution::initial;
};

class GameState {
 public:
  [[nodiscard]] const GameConfig& config() const noexcept { return config_; }
  [[nodiscard]] const std::vector<StageRecord>& history() const noexcept { return history_; }
  [[nodiscard]] GameStatus status() const noexcept { return status_; }
  [[nodiscard]] int stage() const noexcept { return stage_; }
  /// Latest completed colouring.
  [[nodiscard]] const Colouring& current() const { return history_.back().colouring; }
  /// While awaiting B (and after A wins): the enlarged collection, new members blank.
  [[nodiscard]] const std::optional<Colouring>& pending() const noexcept { return pending_; }
  [[nodiscard]] const std::optional<IntervalSet>& pending_added() const noexcept { return pending_added_; }
  /// A witness of why A won, when one was found.
  [[nodiscard]] const std::optional<Violation>& last_violation() const noexcept { return last_violation_; }
  [[nodiscard]] const std::optional<Player>& conceded_by() const noexcept { return conceded_by_; }
  [[nodiscard]] bool finished() const noexcept;
  /// Player to act, if any.
  [[nodiscard]] std::optional<Player> to_move() const noexcept;

  friend struct GameStateAccess;

 private:
  GameConfig config_;
  std::vector<StageRecord> history_;
  GameStatus status_ = GameStatus::awaiting_A;
  int stage_ = 0;
  std::optional<Colouring> pending_;
  std::optional<IntervalSet> pending_added_;
  std::optional<Violation> last_violation_;
  std::optional<Player> conceded_by_;
};

/// Error(precondition) with the Violation when the initial colouring is not
/// homogeneous; Error(invalid_argument) for malformed configs.
[[nodiscard]] GameState new_game(GameConfig config);

/// Error(illegal_move) for an empty or overlapping addition, or (restricted
/// mode) a non-previsible one; Error(out_of_turn) unless awaiting A.
[[nodiscard]] GameState apply_move_A(const GameState& state, const MoveA& move);

/// Engine reply: the constructive colourer for previsible pairs, otherwise
/// the oracle; no extension at all means A wins. Error(budget_exceeded)
/// leaves the game where it was.
[[nodiscard]] GameState respond_B(const GameState& state);

/// Human reply: colours for exactly the newly added intervals, validated as a
/// whole. Error(illegal_move) with the Violation when inhomogeneous.
[[nodiscard]] GameState submit_colouring_B(const GameState& state,
                                           const std::vector<std::pair<DyadicInterval, int>>& assignments);

[[nodiscard]] GameState concede(const GameState& state, Player who);

struct ExtensionSearch {
  /// nullopt when the budget ran out before a decision.
  std::optional<bool> exists;
  std::optional<IntervalSet> witness;
  std::uint64_t checked = 0;
};

/// Is there a strict extension U of the current collection with (C, U)
/// d-previsible? Candidates are tried by increasing size, then the whole
/// complement.
[[nodiscard]] ExtensionSearch legal_previsible_extension_exists(const GameState& state,
                                                                std::uint64_t budget = 100'000);

/// Player A hint: the scripted chain move when the game follows a chain,
/// otherwise a single interval or pair that leaves B without an extension.
/// Unrestricted games only.
[[nodiscard]] std::optional<MoveA> hint_A(const GameState& state);

/// A random legal move (respecting previsibility in restricted mode).
[[nodiscard]] MoveA random_move_A(const GameState& state, std::mt19937_64& rng);

struct TranscriptEntry {
  int stage = 0;
  IntervalSet added;
  /// B's colours for `added`, in index order; absent when B could not answer.
  std::optional<std::vector<int>> colours;
  std::optional<Player> conceded;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

[[nodiscard]] std::vector<TranscriptEntry> transcript(const GameState& state);

/// Rebuilds a game from its config and transcript. Recorded colourings are
/// re-validated; entries without one are answered by the engine.
[[nodiscard]] GameState replay(const GameConfig& config, const std::vector<TranscriptEntry>& entries);

/// Plays engine seats until a human must act or the game ends. An engine A
/// plays its hint when there is one and otherwise a random legal move drawn
/// from a generator seeded with the stage number, so replays are stable.
[[nodiscard]] GameState advance_engines(GameState state);

}  // namespace dyad
