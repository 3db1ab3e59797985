#include "dyad/json_io.hpp"

namespace dyad::io {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::invalid_argument, "malformed JSON: " + what);
}

const json& field(const json& v, const char* name) {
  if (!v.is_object()) malformed(std::string("expected an object holding \"") + name + "\"");
  auto it = v.find(name);
  if (it == v.end()) malformed(std::string("missing field \"") + name + "\"");
  return *it;
}

template <typename T>
T get_as(const json& v, const char* name) {
  const json& f = field(v, name);
  try {
    return f.get<T>();
  } catch (const json::exception&) {
    malformed(std::string("field \"") + name + "\" has the wrong type");
  }
}

template <typename T>
T get_or(const json& v, const char* name, T fallback) {
  if (!v.is_object() || !v.contains(name) || v.at(name).is_null()) return fallback;
  return get_as<T>(v, name);
}

}  // namespace

HomogeneityParams Collection::params() const { return {eta.value_or(Rational(1, 2)), d}; }

json to_json(DyadicInterval I) { return json{{"level", I.level}, {"index", I.index}}; }

DyadicInterval interval_from_json(const json& v) {
  const auto level = get_as<long long>(v, "level");
  const auto index = get_as<long long>(v, "index");
  if (level < 0 || level > kMaxLevel || index < 0) malformed("interval out of range");
  return make_interval(static_cast<int>(level), static_cast<std::uint64_t>(index));
}

json to_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

Rational rational_from_json(const json& v) {
  return Rational(get_as<std::int64_t>(v, "num"), get_as<std::int64_t>(v, "den"));
}

json intervals_to_json(const Colouring& col) {
  json out = json::array();
  for (std::size_t p = 0; p < col.base().size(); ++p) {
    json item = to_json(col.base()[p]);
    if (col.colour_at(p) != kUncoloured) item["colour"] = col.colour_at(p);
    out.push_back(std::move(item));
  }
  return out;
}

json intervals_to_json(const IntervalSet& set) {
  json out = json::array();
  for (const auto I : set.members()) out.push_back(to_json(I));
  return out;
}

IntervalSet interval_set_from_json(const json& v, int level) {
  if (!v.is_array()) malformed("expected an array of intervals");
  std::vector<DyadicInterval> members;
  for (const auto& item : v) members.push_back(interval_from_json(item));
  return IntervalSet::from_intervals(level, members);
}

json collection_to_json(const Colouring& col, const std::optional<Rational>& eta) {
  json out{{"j", col.level()}, {"d", col.d()}};
  if (eta) out["eta"] = to_json(*eta);
  out["intervals"] = intervals_to_json(col);
  return out;
}

Collection collection_from_json(const json& v) {
  Collection c;
  const auto j = get_as<long long>(v, "j");
  if (j < 0 || j > kMaxLevel) malformed("j out of range");
  c.j = static_cast<int>(j);
  const auto d = get_as<long long>(v, "d");
  if (d < 1 || d > 1'000'000) malformed("d out of range");
  c.d = static_cast<int>(d);
  if (v.contains("eta") && !v.at("eta").is_null()) c.eta = rational_from_json(v.at("eta"));
  const json& items = field(v, "intervals");
  if (!items.is_array()) malformed("\"intervals\" must be an array");
  std::vector<DyadicInterval> members;
  std::vector<int> colours;
  for (const auto& item : items) {
    members.push_back(interval_from_json(item));
    colours.push_back(static_cast<int>(get_or<long long>(item, "colour", kUncoloured)));
  }
  IntervalSet base = IntervalSet::from_intervals(c.j, members);
  // from_intervals sorts; carry the colours along.
  std::vector<int> sorted(base.size(), kUncoloured);
  for (std::size_t i = 0; i < members.size(); ++i) {
    const int col = colours[i];
    if (col != kUncoloured && (col < 1 || col > c.d)) {
      malformed("colour " + std::to_string(col) + " outside 1.." + std::to_string(c.d));
    }
    sorted[*base.position(members[i])] = col;
  }
  c.colouring = Colouring(std::move(base), c.d, std::move(sorted));
  return c;
}

json to_json(const Violation& v) {
  json out{{"kind", to_string(v.kind)}, {"testing_interval", to_json(v.testing_interval)}};
  switch (v.kind) {
    case ViolationKind::hom1:
      out["detail"] = json{{"colour", v.colour}, {"count", v.count}};
      break;
    case ViolationKind::hom2:
      out["detail"] = json{{"max", v.max_count},
                           {"min", v.min_count},
                           {"colour_max", v.argmax_colour},
                           {"colour_min", v.argmin_colour}};
      break;
    case ViolationKind::previs:
      out["detail"] = json{{"parent", to_json(v.testing_interval)},
                           {"heavy_child", to_json(v.heavy_child)},
                           {"heavy_side", (v.heavy_child.index & 1u) ? "right" : "left"}};
      break;
  }
  return out;
}

Violation violation_from_json(const json& v) {
  Violation out;
  auto kind = parse_violation_kind(get_as<std::string>(v, "kind"));
  if (!kind) malformed("unknown violation kind");
  out.kind = *kind;
  out.testing_interval = interval_from_json(field(v, "testing_interval"));
  const json& detail = field(v, "detail");
  switch (out.kind) {
    case ViolationKind::hom1:
      out.colour = get_as<int>(detail, "colour");
      out.count = get_as<long long>(detail, "count");
      break;
    case ViolationKind::hom2:
      out.max_count = get_as<long long>(detail, "max");
      out.min_count = get_as<long long>(detail, "min");
      out.argmax_colour = get_as<int>(detail, "colour_max");
      out.argmin_colour = get_as<int>(detail, "colour_min");
      break;
    case ViolationKind::previs:
      out.heavy_child = interval_from_json(field(detail, "heavy_child"));
      break;
  }
  return out;
}

json to_json(const ExtensionReport& r, const std::optional<Rational>& eta) {
  json out{{"count", r.count}, {"at_least", r.at_least}, {"visited", r.visited}};
  json witnesses = json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(collection_to_json(w, eta));
  out["witnesses"] = std::move(witnesses);
  out["canonical_count"] = r.canonical_count ? json(*r.canonical_count) : json(nullptr);
  return out;
}

json to_json(const ChainSpec& s) {
  return json{{"a", s.a},           {"n", s.n},           {"j", s.j},
              {"anchor", s.anchor}, {"i_slots", s.i_slots}, {"j_slots", s.j_slots}};
}

ChainSpec chain_spec_from_json(const json& v) {
  ChainSpec s;
  s.a = get_as<int>(v, "a");
  s.n = get_as<int>(v, "n");
  s.j = get_as<int>(v, "j");
  s.anchor = get_or<std::uint64_t>(v, "anchor", 0);
  s.i_slots = get_or<std::vector<std::uint64_t>>(v, "i_slots", {});
  s.j_slots = get_or<std::vector<std::uint64_t>>(v, "j_slots", {});
  return s;
}

json to_json(const StageFamily& fam) {
  json out{{"spec", to_json(fam.spec)}, {"d", fam.spec.d()}, {"eta", to_json(fam.spec.eta())}};
  auto list = [](const std::vector<DyadicInterval>& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(to_json(x));
    return a;
  };
  out["chain"] = list(fam.chain);
  out["brothers"] = list(fam.brothers);
  out["I"] = list(fam.i_intervals);
  out["J"] = list(fam.j_intervals);
  json stages = json::array();
  for (int k = 0; k <= fam.spec.n; ++k) {
    stages.push_back(json{{"k", k}, {"intervals", intervals_to_json(fam.C(k))}});
  }
  out["stages"] = std::move(stages);
  out["initial"] = collection_to_json(fam.initial, fam.spec.eta());
  return out;
}

json to_json(const CounterexampleReport& r) {
  return json{{"A", r.stage0_classes},
              {"B", r.unique_counts},
              {"B_forced_colour_one", r.forced_to_one},
              {"B_matches_forced", r.matches_forced},
              {"C", r.final_count},
              {"boundary_counts", r.boundary_counts},
              {"boundary_holds_relaxed_eta", r.boundary_holds_relaxed},
              {"boundary_holds_eta", r.boundary_holds_strict},
              {"chain_profile_ok", r.chain_profile_ok},
              {"ok", r.ok()}};
}

GameConfig game_config_from_json(const json& v) {
  if (!v.is_object()) malformed("game config must be an object");
  GameConfig cfg;
  const json preset = v.value("preset", json(nullptr));
  if (!preset.is_null() && get_as<std::string>(preset, "kind") == "counterexample") {
    cfg = counterexample_config(chain_spec_from_json(preset), get_or<bool>(v, "restricted", false));
  } else {
    const int j = get_as<int>(v, "j");
    const int d = get_as<int>(v, "d");
    const Rational eta = v.contains("eta") ? rational_from_json(v.at("eta")) : Rational(1, 2);
    cfg.params = HomogeneityParams(eta, d);
    cfg.j = j;
    cfg.restricted = get_or<bool>(v, "restricted", false);
    if (v.contains("initial") && !v.at("initial").is_null()) {
      json coll{{"j", j}, {"d", d}, {"intervals", v.at("initial")}};
      cfg.initial = collection_from_json(coll).colouring;
    } else {
      cfg.initial = Colouring(IntervalSet(j), d);
    }
    if (v.contains("script") && !v.at("script").is_null()) cfg.script = chain_spec_from_json(v.at("script"));
  }
  if (v.contains("seats")) {
    const json& seats = v.at("seats");
    auto seat = [&](const char* who, Seat fallback) {
      if (!seats.contains(who)) return fallback;
      auto s = parse_seat(get_as<std::string>(seats, who));
      if (!s) malformed(std::string("unknown seat for ") + who);
      return *s;
    };
    cfg.seat_A = seat("A", cfg.seat_A);
    cfg.seat_B = seat("B", cfg.seat_B);
  }
  cfg.budget = get_or<std::uint64_t>(v, "budget", cfg.budget);
  cfg.max_stages = get_or<int>(v, "max_stages", cfg.max_stages);
  return cfg;
}

json to_json(const GameConfig& cfg) {
  json out{{"j", cfg.j},
           {"d", cfg.params.d()},
           {"eta", to_json(cfg.params.eta())},
           {"restricted", cfg.restricted},
           {"initial", intervals_to_json(cfg.initial)},
           {"seats", json{{"A", to_string(cfg.seat_A)}, {"B", to_string(cfg.seat_B)}}},
           {"budget", cfg.budget},
           {"max_stages", cfg.max_stages}};
  out["script"] = cfg.script ? to_json(*cfg.script) : json(nullptr);
  return out;
}

json to_json(const GameState& state) {
  const auto& cfg = state.config();
  json out{{"j", cfg.j},
           {"d", cfg.params.d()},
           {"eta", to_json(cfg.params.eta())},
           {"restricted", cfg.restricted},
           {"seats", json{{"A", to_string(cfg.seat_A)}, {"B", to_string(cfg.seat_B)}}},
           {"status", to_string(state.status())},
           {"stage", state.stage()}};
  const auto mover = state.to_move();
  out["to_move"] = mover ? json(to_string(*mover)) : json(nullptr);
  const Colouring& board = state.pending() ? *state.pending() : state.current();
  out["intervals"] = intervals_to_json(board);
  out["pending"] = state.pending_added() ? intervals_to_json(*state.pending_added()) : json::array();
  out["violation"] = state.last_violation() ? to_json(*state.last_violation()) : json(nullptr);
  out["conceded_by"] = state.conceded_by() ? json(to_string(*state.conceded_by())) : json(nullptr);
  json history = json::array();
  for (const auto& rec : state.history()) {
    history.push_back(json{{"stage", rec.stage},
                           {"added", intervals_to_json(rec.added)},
                           {"size", rec.colouring.base().size()},
                           {"resolution", to_string(rec.resolution)}});
  }
  out["history"] = std::move(history);
  return out;
}

json to_json(const std::vector<TranscriptEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) {
    json item{{"stage", e.stage}, {"added", intervals_to_json(e.added)}};
    if (e.colours) {
      json col = json::array();
      std::size_t i = 0;
      for (const auto I : e.added.members()) {
        json c = to_json(I);
        c["colour"] = (*e.colours)[i++];
        col.push_back(std::move(c));
      }
      item["colouring"] = std::move(col);
    } else {
      item["colouring"] = nullptr;
    }
    if (e.conceded) item["conceded"] = to_string(*e.conceded);
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<TranscriptEntry> transcript_from_json(const json& v, int level) {
  if (!v.is_array()) malformed("transcript must be an array");
  std::vector<TranscriptEntry> out;
  for (const auto& item : v) {
    TranscriptEntry e;
    e.stage = get_as<int>(item, "stage");
    e.added = interval_set_from_json(field(item, "added"), level);
    if (item.contains("colouring") && !item.at("colouring").is_null()) {
      std::vector<int> colours(e.added.size(), 0);
      for (const auto& [I, c] : assignments_from_json(item.at("colouring"))) {
        auto pos = e.added.position(I);
        if (!pos) malformed("transcript colours an interval that was not added");
        colours[*pos] = c;
      }
      e.colours = std::move(colours);
    }
    if (item.contains("conceded")) {
      auto p = parse_player(get_as<std::string>(item, "conceded"));
      if (!p) malformed("unknown player in \"conceded\"");
      e.conceded = *p;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::pair<DyadicInterval, int>> assignments_from_json(const json& v) {
  if (!v.is_array()) malformed("assignments must be an array");
  std::vector<std::pair<DyadicInterval, int>> out;
  for (const auto& item : v) out.emplace_back(interval_from_json(item), get_as<int>(item, "colour"));
  return out;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace dyad::io
