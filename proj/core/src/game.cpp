#include "dyad/game.hpp"

#include <algorithm>
#include <numeric>

#include "dyad/colourer.hpp"
#include "dyad/criteria.hpp"

namespace dyad {

std::string to_string(Player p) { return p == Player::A ? "A" : "B"; }

std::string to_string(Seat s) { return s == Seat::human ? "human" : "engine"; }

std::string to_string(GameStatus s) {
  switch (s) {
    case GameStatus::awaiting_A: return "awaiting_A";
    case GameStatus::awaiting_B: return "awaiting_B";
    case GameStatus::A_wins: return "A_wins";
    case GameStatus::B_wins: return "B_wins";
    case GameStatus::draw: return "draw";
  }
  return "?";
}

std::string to_string(Resolution r) {
  switch (r) {
    case Resolution::initial: return "initial";
    case Resolution::extend_colouring: return "extend_colouring";
    case Resolution::oracle: return "oracle";
    case Resolution::submitted: return "submitted";
  }
  return "?";
}

std::optional<Player> parse_player(std::string_view s) {
  if (s == "A") return Player::A;
  if (s == "B") return Player::B;
  return std::nullopt;
}

std::optional<Seat> parse_seat(std::string_view s) {
  if (s == "human") return Seat::human;
  if (s == "engine") return Seat::engine;
  return std::nullopt;
}

std::optional<GameStatus> parse_status(std::string_view s) {
  for (auto st : {GameStatus::awaiting_A, GameStatus::awaiting_B, GameStatus::A_wins,
                  GameStatus::B_wins, GameStatus::draw}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

GameConfig counterexample_config(const ChainSpec& spec, bool restricted) {
  const StageFamily fam = build_counterexample(spec);
  GameConfig cfg;
  cfg.params = spec.params();
  cfg.j = spec.j;
  cfg.restricted = restricted;
  cfg.initial = fam.initial;
  cfg.script = fam.spec;
  return cfg;
}

bool GameState::finished() const noexcept {
  return status_ == GameStatus::A_wins || status_ == GameStatus::B_wins ||
         status_ == GameStatus::draw;
}

std::optional<Player> GameState::to_move() const noexcept {
  if (status_ == GameStatus::awaiting_A) return Player::A;
  if (status_ == GameStatus::awaiting_B) return Player::B;
  return std::nullopt;
}

namespace {

// Boards larger than this are never enumerated interval by interval.
constexpr int kEnumerableLevel = 20;

void require_status(const GameState& s, GameStatus want) {
  if (s.status() != want) {
    throw Error(ErrorCode::out_of_turn, "game is " + to_string(s.status()) + ", expected " +
                                            to_string(want));
  }
}

std::vector<std::uint64_t> free_indices(const IntervalSet& have) {
  if (have.level() > kEnumerableLevel) {
    throw Error(ErrorCode::budget_exceeded, "board too large to enumerate free intervals");
  }
  std::vector<std::uint64_t> out;
  auto taken = have.indices();
  std::size_t p = 0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << have.level()); ++k) {
    if (p < taken.size() && taken[p] == k) {
      ++p;
    } else {
      out.push_back(k);
    }
  }
  return out;
}

// Calls visit(subset) for every k-subset of `pool`, stopping early when
// visit returns true. Returns false if `budget` ran out.
template <typename Visit>
bool for_each_subset(const std::vector<std::uint64_t>& pool, std::size_t k, std::uint64_t& budget,
                     Visit&& visit) {
  if (k == 0 || k > pool.size()) return true;
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  std::vector<std::uint64_t> subset(k);
  while (true) {
    if (budget == 0) return false;
    --budget;
    for (std::size_t i = 0; i < k; ++i) subset[i] = pool[pick[i]];
    if (visit(subset)) return true;
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == pool.size() - k + (i - 1)) --i;
    if (i == 0) return true;
    ++pick[i - 1];
    for (std::size_t t = i; t < k; ++t) pick[t] = pick[t - 1] + 1;
  }
}

// Violation of the candidate fill whose first failure is coarsest, when the
// blank set is small enough to enumerate.
std::optional<Violation> explain_loss(const Colouring& pending, const HomogeneityParams& params) {
  std::vector<std::size_t> blanks;
  for (std::size_t p = 0; p < pending.base().size(); ++p) {
    if (pending.colour_at(p) == kUncoloured) blanks.push_back(p);
  }
  const auto d = static_cast<std::uint64_t>(params.d());
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < blanks.size(); ++i) {
    combos *= d;
    if (combos > 4096) return std::nullopt;
  }
  std::optional<Violation> best;
  std::vector<int> colours(pending.colours().begin(), pending.colours().end());
  for (std::uint64_t code = 0; code < combos; ++code) {
    std::uint64_t rest = code;
    for (std::size_t p : blanks) {
      colours[p] = static_cast<int>(rest % d) + 1;
      rest /= d;
    }
    auto r = check_homogeneous(Colouring(pending.base(), params.d(), colours), params);
    if (r.violation && (!best || r.violation->testing_interval < best->testing_interval)) {
      best = r.violation;
    }
  }
  return best;
}

}  // namespace

struct GameStateAccess {
  static GameState create(GameConfig config) {
    if (config.initial.level() != config.j) {
      throw Error(ErrorCode::invalid_argument, "initial collection is not in D_" + std::to_string(config.j));
    }
    if (config.initial.d() != config.params.d()) {
      throw Error(ErrorCode::invalid_argument, "initial colouring d does not match parameters");
    }
    if (config.max_stages < 0) throw Error(ErrorCode::invalid_argument, "max_stages must be >= 0");
    if (!config.initial.total()) {
      throw Error(ErrorCode::precondition, "initial colouring must be total");
    }
    if (auto r = check_homogeneous(config.initial, config.params); !r) {
      throw Error(ErrorCode::precondition,
                  "initial colouring is not homogeneous: " + describe(*r.violation), r.violation);
    }
    GameState s;
    s.config_ = std::move(config);
    s.history_.push_back(StageRecord{0, IntervalSet(s.config_.j), s.config_.initial, Resolution::initial});
    if (s.config_.initial.base().is_full()) {
      s.status_ = GameStatus::B_wins;
      s.stage_ = 0;
    } else {
      s.status_ = GameStatus::awaiting_A;
      s.stage_ = 1;
    }
    return s;
  }

  static GameState move(const GameState& state, const MoveA& move) {
    require_status(state, GameStatus::awaiting_A);
    const auto& cfg = state.config();
    if (move.added.level() != cfg.j) {
      throw Error(ErrorCode::illegal_move, "added intervals are not in D_" + std::to_string(cfg.j));
    }
    if (move.added.empty()) throw Error(ErrorCode::illegal_move, "not a strict superset");
    const IntervalSet& have = state.current().base();
    if (!have.disjoint(move.added)) {
      throw Error(ErrorCode::illegal_move,
                  "not a strict superset: added intervals overlap the collection");
    }
    if (cfg.restricted) {
      if (auto r = check_previsible(have, move.added, cfg.params.d()); !r) {
        throw Error(ErrorCode::illegal_move, "move is not d-previsible: " + describe(*r.violation),
                    r.violation);
      }
    }
    GameState next = state;
    next.pending_ = state.current().extended_by(move.added);
    next.pending_added_ = move.added;
    next.status_ = GameStatus::awaiting_B;
    next.last_violation_.reset();
    return next;
  }

  static GameState engine_reply(const GameState& state) {
    require_status(state, GameStatus::awaiting_B);
    const auto& cfg = state.config();
    const Colouring& pending = *state.pending_;
    const IntervalSet& added = *state.pending_added_;

    if (check_previsible(state.current().base(), added, cfg.params.d())) {
      return complete(state, extend_colouring(state.current(), added, cfg.params),
                      Resolution::extend_colouring);
    }
    OracleOptions opt;
    opt.limit = 1;
    opt.max_witnesses = 1;
    opt.budget = cfg.budget;
    auto report = oracle_extensions(pending, cfg.params, opt);
    if (report.count > 0) return complete(state, report.witnesses.front(), Resolution::oracle);

    GameState next = state;
    next.status_ = GameStatus::A_wins;
    next.last_violation_ = explain_loss(pending, cfg.params);
    return next;
  }

  static GameState submit(const GameState& state,
                          const std::vector<std::pair<DyadicInterval, int>>& assignments) {
    require_status(state, GameStatus::awaiting_B);
    const auto& cfg = state.config();
    const IntervalSet& added = *state.pending_added_;
    std::vector<int> colours(state.pending_->colours().begin(), state.pending_->colours().end());
    std::vector<char> seen(added.size(), 0);
    for (const auto& [I, c] : assignments) {
      auto pos = added.position(I);
      if (!pos) throw Error(ErrorCode::illegal_move, to_string(I) + " is not a newly added interval");
      if (seen[*pos]) throw Error(ErrorCode::illegal_move, to_string(I) + " assigned twice");
      if (c < 1 || c > cfg.params.d()) {
        throw Error(ErrorCode::illegal_move,
                    "colour " + std::to_string(c) + " outside 1.." + std::to_string(cfg.params.d()));
      }
      seen[*pos] = 1;
      colours[*state.pending_->base().position(I)] = c;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw Error(ErrorCode::illegal_move, "every newly added interval needs a colour");
    }
    Colouring col(state.pending_->base(), cfg.params.d(), std::move(colours));
    if (auto r = check_homogeneous(col, cfg.params); !r) {
      throw Error(ErrorCode::illegal_move, "colouring is not homogeneous: " + describe(*r.violation),
                  r.violation);
    }
    return complete(state, std::move(col), Resolution::submitted);
  }

  static GameState give_up(const GameState& state, Player who) {
    if (state.finished()) throw Error(ErrorCode::out_of_turn, "game is already over");
    if (state.to_move() != who) {
      throw Error(ErrorCode::out_of_turn, "only the player to move may concede");
    }
    GameState next = state;
    next.status_ = who == Player::A ? GameStatus::B_wins : GameStatus::A_wins;
    next.conceded_by_ = who;
    return next;
  }

 private:
  static GameState complete(const GameState& state, Colouring colouring, Resolution how) {
    GameState next = state;
    const int stage = state.stage_;
    next.history_.push_back(StageRecord{stage, *state.pending_added_, std::move(colouring), how});
    next.pending_.reset();
    next.pending_added_.reset();
    const auto& cfg = next.config_;
    if (next.current().base().is_full()) {
      next.status_ = GameStatus::B_wins;
    } else if (cfg.restricted &&
               legal_previsible_extension_exists(next).exists == std::optional<bool>(false)) {
      next.status_ = GameStatus::B_wins;
    } else if (cfg.max_stages > 0 && stage >= cfg.max_stages) {
      next.status_ = GameStatus::draw;
    } else {
      next.status_ = GameStatus::awaiting_A;
      next.stage_ = stage + 1;
    }
    return next;
  }
};

GameState new_game(GameConfig config) { return GameStateAccess::create(std::move(config)); }

GameState apply_move_A(const GameState& state, const MoveA& move) {
  return GameStateAccess::move(state, move);
}

GameState respond_B(const GameState& state) { return GameStateAccess::engine_reply(state); }

GameState submit_colouring_B(const GameState& state,
                             const std::vector<std::pair<DyadicInterval, int>>& assignments) {
  return GameStateAccess::submit(state, assignments);
}

GameState concede(const GameState& state, Player who) { return GameStateAccess::give_up(state, who); }

ExtensionSearch legal_previsible_extension_exists(const GameState& state, std::uint64_t budget) {
  ExtensionSearch out;
  const IntervalSet& have = state.current().base();
  const int d = state.config().params.d();
  if (have.is_full()) {
    out.exists = false;
    return out;
  }
  if (have.level() > kEnumerableLevel) return out;
  const auto pool = free_indices(have);
  std::uint64_t left = budget;
  for (std::size_t k = 1; k <= pool.size() && !out.exists; ++k) {
    const bool finished = for_each_subset(pool, k, left, [&](const std::vector<std::uint64_t>& sub) {
      ++out.checked;
      IntervalSet u(have.level(), sub);
      if (check_previsible(have, u, d)) {
        out.exists = true;
        out.witness = std::move(u);
        return true;
      }
      return false;
    });
    if (!finished) break;
  }
  if (!out.exists) {
    // With H = D_j both children of every node hold equally many members, so
    // the full complement is previsible whenever the board is not full.
    IntervalSet u(have.level(), pool);
    ++out.checked;
    if (check_previsible(have, u, d)) {
      out.exists = true;
      out.witness = std::move(u);
    }
  }
  return out;
}

std::optional<MoveA> hint_A(const GameState& state) {
  if (state.status() != GameStatus::awaiting_A || state.config().restricted) return std::nullopt;
  const auto& cfg = state.config();
  const IntervalSet& have = state.current().base();
  if (have.is_full()) return std::nullopt;

  if (cfg.script) {
    const StageFamily fam = build_counterexample(*cfg.script);
    const int k = state.stage();
    if (k >= 1 && k <= fam.spec.n && have == fam.C(k - 1)) {
      const DyadicInterval J = fam.J(fam.spec.n - k + 1);
      return MoveA{IntervalSet::from_intervals(cfg.j, std::span(&J, 1))};
    }
  }

  if (have.level() > kEnumerableLevel) return std::nullopt;
  const auto pool = free_indices(have);
  std::uint64_t left = cfg.budget;
  std::optional<MoveA> killer;
  auto try_move = [&](const std::vector<std::uint64_t>& sub) {
    IntervalSet added(cfg.j, sub);
    OracleOptions opt;
    opt.limit = 1;
    opt.max_witnesses = 0;
    opt.budget = left;
    const auto report = oracle_extensions(state.current().extended_by(added), cfg.params, opt);
    left -= std::min(left, report.visited);
    if (report.count == 0) {
      killer = MoveA{std::move(added)};
      return true;
    }
    return false;
  };
  try {
    std::uint64_t subsets = cfg.budget;
    for (std::size_t k = 1; k <= 2 && !killer; ++k) {
      if (!for_each_subset(pool, k, subsets, try_move)) break;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::budget_exceeded) throw;
    return std::nullopt;
  }
  return killer;
}

MoveA random_move_A(const GameState& state, std::mt19937_64& rng) {
  require_status(state, GameStatus::awaiting_A);
  const auto& cfg = state.config();
  const IntervalSet& have = state.current().base();
  auto pool = free_indices(have);
  if (pool.empty()) throw Error(ErrorCode::illegal_move, "the board is full");
  const int d = cfg.params.d();

  auto sample = [&](std::size_t size) {
    std::vector<std::uint64_t> shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.resize(size);
    return IntervalSet(have.level(), std::move(shuffled));
  };
  const std::size_t top = std::max<std::size_t>(1, pool.size() / 2);
  std::uniform_int_distribution<std::size_t> size_dist(1, top);

  if (!cfg.restricted) return MoveA{sample(size_dist(rng))};

  for (int attempt = 0; attempt < 64; ++attempt) {
    IntervalSet u = sample(size_dist(rng));
    if (check_previsible(have, u, d)) return MoveA{std::move(u)};
  }
  std::vector<std::uint64_t> order = pool;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::uint64_t k : order) {
    IntervalSet u(have.level(), std::vector<std::uint64_t>{k});
    if (check_previsible(have, u, d)) return MoveA{std::move(u)};
  }
  return MoveA{IntervalSet(have.level(), std::move(pool))};
}

std::vector<TranscriptEntry> transcript(const GameState& state) {
  std::vector<TranscriptEntry> out;
  for (std::size_t i = 1; i < state.history().size(); ++i) {
    const StageRecord& rec = state.history()[i];
    std::vector<int> colours;
    for (const auto I : rec.added.members()) colours.push_back(*rec.colouring.colour_of(I));
    out.push_back(TranscriptEntry{rec.stage, rec.added, std::move(colours), std::nullopt});
  }
  if (state.pending_added()) {
    TranscriptEntry e{state.stage(), *state.pending_added(), std::nullopt, std::nullopt};
    if (state.conceded_by() == Player::B) e.conceded = Player::B;
    out.push_back(std::move(e));
  } else if (state.conceded_by() == Player::A) {
    out.push_back(TranscriptEntry{state.stage(), IntervalSet(state.config().j), std::nullopt, Player::A});
  }
  return out;
}

GameState replay(const GameConfig& config, const std::vector<TranscriptEntry>& entries) {
  GameState s = new_game(config);
  for (const auto& e : entries) {
    if (e.stage != s.stage()) {
      throw Error(ErrorCode::invalid_argument, "transcript stage " + std::to_string(e.stage) +
                                                   " does not match game stage " +
                                                   std::to_string(s.stage()));
    }
    if (e.conceded == Player::A) {
      s = concede(s, Player::A);
      continue;
    }
    s = apply_move_A(s, MoveA{e.added});
    if (e.conceded == Player::B) {
      s = concede(s, Player::B);
    } else if (!e.colours) {
      // A human B that has not answered yet leaves the stage pending.
      if (config.seat_B == Seat::engine) s = respond_B(s);
    } else if (config.seat_B == Seat::engine) {
      s = respond_B(s);
      const auto& rec = s.history().back();
      std::vector<int> got;
      for (const auto I : rec.added.members()) got.push_back(*rec.colouring.colour_of(I));
      if (got != *e.colours) {
        throw Error(ErrorCode::invalid_argument,
                    "transcript diverges from the engine at stage " + std::to_string(e.stage));
      }
    } else {
      std::vector<std::pair<DyadicInterval, int>> assignments;
      std::size_t i = 0;
      for (const auto I : e.added.members()) assignments.emplace_back(I, (*e.colours).at(i++));
      s = submit_colouring_B(s, assignments);
    }
  }
  return s;
}

GameState advance_engines(GameState state) {
  while (!state.finished()) {
    const auto& cfg = state.config();
    if (state.status() == GameStatus::awaiting_A && cfg.seat_A == Seat::engine) {
      if (auto hint = hint_A(state)) {
        state = apply_move_A(state, *hint);
      } else {
        std::mt19937_64 rng(static_cast<std::uint64_t>(state.stage()));
        state = apply_move_A(state, random_move_A(state, rng));
      }
    } else if (state.status() == GameStatus::awaiting_B && cfg.seat_B == Seat::engine) {
      state = respond_B(state);
    } else {
      break;
    }
  }
  return state;
}

}  // namespace dyad
