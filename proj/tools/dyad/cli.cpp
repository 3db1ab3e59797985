#include "dyad/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "dyad/adversary.hpp"
#include "dyad/colourer.hpp"
#include "dyad/criteria.hpp"
#include "dyad/game.hpp"
#include "dyad/json_io.hpp"
#include "dyad/oracle.hpp"
#include "dyad/service.hpp"

namespace dyad::cli {

namespace {

using nlohmann::json;

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string slurp(const std::string& path, std::istream& in) {
  std::stringstream buf;
  if (path.empty() || path == "-") {
    buf << in.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::invalid_argument, "cannot open " + path);
    buf << f.rdbuf();
  }
  return buf.str();
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text), 1);
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::invalid_argument, "cannot parse rational \"" + text + "\"");
  }
}

std::uint64_t default_budget() {
  if (const char* env = std::getenv("DYAD_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::invalid_argument, "DYAD_BUDGET is not a number");
    }
  }
  return kDefaultSearchBudget;
}

void emit(const Io& io, const json& value) { io.out << value.dump() << '\n'; }

int fail(const Io& io, const Error& e) {
  json body{{"error", to_string(e.code())}, {"message", e.what()}};
  if (e.violation()) body["violation"] = io::to_json(*e.violation());
  emit(io, body);
  io.err << "dyad: " << e.what() << '\n';
  return kUsage;
}

// Shared input plumbing for the collection-reading subcommands.
struct Input {
  std::string path;
  std::string eta;
  bool pretty = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("input", path, "collection JSON (file path, '-' or omitted for stdin)");
    cmd->add_option("--eta", eta, "override eta, as p/q");
    cmd->add_flag("--pretty", pretty, "human-readable tree instead of JSON");
  }

  io::Collection load(std::istream& in) const {
    io::Collection c = io::collection_from_json(io::parse(slurp(path, in)));
    if (!eta.empty()) c.eta = parse_rational(eta);
    return c;
  }
};

std::string cell(int width, const std::string& text, char fill = ' ') {
  if (static_cast<int>(text.size()) >= width) return text.substr(0, static_cast<std::size_t>(width));
  const int pad = width - static_cast<int>(text.size());
  return std::string(static_cast<std::size_t>(pad / 2), fill) + text +
         std::string(static_cast<std::size_t>(pad - pad / 2), fill);
}

}  // namespace

std::string render_tree(const Colouring& col, const std::optional<Violation>& marked) {
  std::ostringstream os;
  const int j = col.level();
  const bool has_mark = marked.has_value();
  if (j > 7) {
    for (std::size_t p = 0; p < col.base().size(); ++p) {
      os << to_string(col.base()[p]) << "  ";
      os << (col.colour_at(p) == kUncoloured ? std::string("_") : std::to_string(col.colour_at(p))) << '\n';
    }
    if (has_mark) os << "* " << describe(*marked) << '\n';
    return os.str();
  }
  const CountTree tree(col);
  for (int l = 0; l < j; ++l) {
    const int width = 2 << (j - l);
    os << "L" << l << (l < 10 ? "  " : " ");
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << l); ++k) {
      const DyadicInterval node{l, k};
      const auto total = tree.table(node).total();
      std::string text = total == 0 ? "" : std::to_string(total);
      if (has_mark && marked->testing_interval == node) text = "*" + text;
      os << '|' << cell(width - 1, text);
    }
    os << "|\n";
  }
  os << "L" << j << (j < 10 ? "  " : " ");
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << j); ++k) {
    const DyadicInterval leaf{j, k};
    const auto pos = col.base().position(leaf);
    std::string text = !pos ? "." : (col.colour_at(*pos) == kUncoloured ? "_" : std::to_string(col.colour_at(*pos)));
    if (has_mark && marked->testing_interval == leaf) text = "*" + text;
    os << '|' << cell(1, text.substr(text.size() - 1));
  }
  os << "|\n";
  if (has_mark) os << "* " << describe(*marked) << '\n';
  return os.str();
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  const Io io{in, out, err};
  CLI::App app{"Homogeneous colourings of dyadic intervals", "dyad"};
  app.require_subcommand(1);
  std::uint64_t budget = 0;
  app.add_option("--budget", budget, "node budget for exhaustive search (default: $DYAD_BUDGET or 10^7)");

  // check
  Input check_in;
  auto* check = app.add_subcommand("check", "is a total colouring (eta, d)-homogeneous?");
  check_in.attach(check);

  // previsible
  Input prev_in;
  auto* prev = app.add_subcommand("previsible", "is (coloured members, blank members) d-previsible?");
  prev_in.attach(prev);

  // modd
  Input modd_in;
  std::string order_text;
  auto* modd = app.add_subcommand("modd", "colour every member modulo d, left to right");
  modd_in.attach(modd);
  modd->add_option("--order", order_text, "colour order, a permutation of 1..d, comma separated");

  // colour
  Input colour_in;
  bool trace = false;
  auto* colour = app.add_subcommand("colour", "extend the colouring of the coloured members to the blank ones");
  colour_in.attach(colour);
  colour->add_flag("--trace", trace, "include the case applied at each node");

  // oracle
  Input oracle_in;
  std::uint64_t limit = 0;
  std::size_t witnesses = 16;
  bool canonical = false;
  auto* oracle = app.add_subcommand("oracle", "count homogeneous extensions by exhaustive search");
  oracle_in.attach(oracle);
  oracle->add_option("--limit", limit, "stop after this many extensions");
  oracle->add_option("--witnesses", witnesses, "how many extensions to return");
  oracle->add_flag("--canonical", canonical, "also count up to colour relabelling (all-blank input)");

  // counterexample
  int ce_a = 1, ce_n = 2, ce_j = 0;
  std::uint64_t ce_anchor = 0;
  std::optional<std::uint64_t> ce_seed;
  bool ce_verify = false, ce_fast = false, ce_pretty = false;
  auto* ce = app.add_subcommand("counterexample", "build the staged family with no homogeneous extension");
  ce->add_option("--a", ce_a, "depth of L_1 below D_j (d = 2^a)")->required();
  ce->add_option("--n", ce_n, "eta = 1/n")->required();
  ce->add_option("--j", ce_j, "leaf level (default n + a + 1)");
  auto* anchor_opt = ce->add_option("--anchor", ce_anchor, "index of L_1 in D_{j-a}");
  ce->add_option("--seed", ce_seed, "random anchor and slots")->excludes(anchor_opt);
  ce->add_flag("--verify", ce_verify, "check the stage claims");
  ce->add_flag("--fast", ce_fast, "verify by direct colour trials instead of the oracle");
  ce->add_flag("--pretty", ce_pretty, "render the stages");

  // selfplay
  std::string sp_config;
  bool sp_restricted = false, sp_random = false;
  std::uint64_t sp_seed = 0;
  int sp_max_stages = 0;
  int sp_a = 1, sp_n = 2, sp_j = 0;
  auto* sp = app.add_subcommand("selfplay", "play a game between engines and print its transcript");
  sp->add_option("--config", sp_config, "game config JSON (default: the chain preset from --a/--n/--j)");
  sp->add_option("--a", sp_a, "chain preset: a");
  sp->add_option("--n", sp_n, "chain preset: n");
  sp->add_option("--j", sp_j, "chain preset: j (default n + a + 1)");
  sp->add_flag("--restricted", sp_restricted, "A's moves must be previsible");
  sp->add_flag("--random", sp_random, "A plays random legal moves instead of hints");
  sp->add_option("--seed", sp_seed, "seed for random moves");
  sp->add_option("--max-stages", sp_max_stages, "declare a draw after this many stages (0: no cap)");

  // replay
  std::string rp_path;
  auto* rp = app.add_subcommand("replay", "rebuild a game from {config, transcript}");
  rp->add_option("input", rp_path, "JSON file ('-' or omitted for stdin)");

  // serve
  ServeOptions serve_opts;
  std::string snapshot;
  auto* srv = app.add_subcommand("serve", "HTTP game service");
  srv->add_option("--port", serve_opts.port, "listen port (0 picks one)");
  srv->add_option("--host", serve_opts.host, "listen address");
  srv->add_option("--cors-origin", serve_opts.cors_origin, "Access-Control-Allow-Origin value");
  srv->add_option("--snapshot", snapshot, "load sessions from and save them to this file");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (budget == 0) budget = default_budget();

    if (*check) {
      const auto c = check_in.load(in);
      const auto r = check_homogeneous(c.colouring, c.params());
      if (check_in.pretty) {
        out << render_tree(c.colouring, r.violation) << (r.ok ? "homogeneous\n" : "");
      } else {
        emit(io, json{{"homogeneous", r.ok}, {"violation", r.violation ? io::to_json(*r.violation) : json()}});
      }
      return r.ok ? kOk : kFalse;
    }

    if (*prev) {
      const auto c = prev_in.load(in);
      const auto r = check_previsible(c.colouring.coloured_members(), c.colouring.uncoloured_members(), c.d);
      if (prev_in.pretty) {
        out << render_tree(c.colouring, r.violation) << (r.ok ? "previsible\n" : "");
      } else {
        emit(io, json{{"previsible", r.ok}, {"violation", r.violation ? io::to_json(*r.violation) : json()}});
      }
      return r.ok ? kOk : kFalse;
    }

    if (*modd) {
      const auto c = modd_in.load(in);
      std::vector<int> order;
      std::stringstream items(order_text);
      for (std::string item; std::getline(items, item, ',');) {
        try {
          order.push_back(std::stoi(item));
        } catch (const std::logic_error&) {
          throw Error(ErrorCode::invalid_argument, "--order expects comma-separated colours");
        }
      }
      const Colouring result = colour_modulo_d(c.colouring.base(), c.d, order);
      if (modd_in.pretty) {
        out << render_tree(result);
      } else {
        emit(io, io::collection_to_json(result, c.eta));
      }
      return kOk;
    }

    if (*colour) {
      const auto c = colour_in.load(in);
      ColourerOptions opts;
      json cases = json::array();
      if (trace) {
        opts.on_case = [&](const CaseTrace& t) {
          cases.push_back(json{{"node", io::to_json(t.node)},
                               {"case", to_string(t.label)},
                               {"mirrored", t.mirrored}});
        };
      }
      const Colouring result =
          extend_colouring(c.colouring.restricted_to(c.colouring.coloured_members()),
                           c.colouring.uncoloured_members(), c.params(), opts);
      if (colour_in.pretty) {
        out << render_tree(result);
      } else {
        json body = io::collection_to_json(result, c.eta);
        if (trace) body["cases"] = std::move(cases);
        emit(io, body);
      }
      return kOk;
    }

    if (*oracle) {
      const auto c = oracle_in.load(in);
      OracleOptions opts;
      if (limit > 0) opts.limit = limit;
      opts.max_witnesses = witnesses;
      opts.budget = budget;
      opts.canonical = canonical;
      const auto r = oracle_extensions(c.colouring, c.params(), opts);
      if (oracle_in.pretty) {
        out << (r.at_least ? "at least " : "") << r.count << " extension(s)\n";
        for (const auto& w : r.witnesses) out << render_tree(w) << '\n';
      } else {
        emit(io, io::to_json(r, c.eta));
      }
      return r.count > 0 ? kOk : kFalse;
    }

    if (*ce) {
      const int j = ce_j > 0 ? ce_j : ce_n + ce_a + 1;
      ChainSpec spec = ChainSpec::leftmost(ce_a, ce_n, j);
      if (ce_seed) {
        std::mt19937_64 rng(*ce_seed);
        spec = ChainSpec::random(ce_a, ce_n, j, rng);
      } else {
        spec.anchor = ce_anchor;
      }
      const StageFamily fam = build_counterexample(spec);
      std::optional<CounterexampleReport> report;
      if (ce_verify) report = verify_counterexample(fam, !ce_fast, budget);
      if (ce_pretty) {
        for (int k = 0; k <= ce_n; ++k) {
          out << "C(" << k << ")\n" << render_tree(Colouring(fam.C(k), fam.spec.d())) << '\n';
        }
        out << "initial colouring\n" << render_tree(fam.initial);
        if (report) out << io::to_json(*report).dump(2) << '\n';
      } else {
        emit(io, json{{"family", io::to_json(fam)}, {"report", report ? io::to_json(*report) : json()}});
      }
      return !report || report->ok() ? kOk : kFalse;
    }

    if (*sp) {
      GameConfig cfg;
      if (!sp_config.empty()) {
        cfg = io::game_config_from_json(io::parse(slurp(sp_config, in)));
        if (sp_restricted) cfg.restricted = true;
      } else {
        const int j = sp_j > 0 ? sp_j : sp_n + sp_a + 1;
        cfg = counterexample_config(ChainSpec::leftmost(sp_a, sp_n, j), sp_restricted);
      }
      cfg.seat_A = Seat::engine;
      cfg.seat_B = Seat::engine;
      cfg.budget = budget;
      if (sp_max_stages > 0) cfg.max_stages = sp_max_stages;
      GameState state = new_game(cfg);
      if (sp_random) {
        std::mt19937_64 rng(sp_seed);
        while (!state.finished()) {
          state = respond_B(apply_move_A(state, random_move_A(state, rng)));
        }
      } else {
        state = advance_engines(std::move(state));
      }
      emit(io, json{{"config", io::to_json(cfg)},
                    {"transcript", io::to_json(transcript(state))},
                    {"final", io::to_json(state)}});
      return kOk;
    }

    if (*rp) {
      const json doc = io::parse(slurp(rp_path, in));
      if (!doc.is_object() || !doc.contains("config") || !doc.contains("transcript")) {
        throw Error(ErrorCode::invalid_argument, "malformed JSON: replay needs \"config\" and \"transcript\"");
      }
      const GameConfig cfg = io::game_config_from_json(doc.at("config"));
      const GameState state = replay(cfg, io::transcript_from_json(doc.at("transcript"), cfg.j));
      emit(io, io::to_json(state));
      return kOk;
    }

    if (*srv) {
      if (!snapshot.empty()) serve_opts.snapshot_path = snapshot;
      return serve(serve_opts, [&](int port) {
        emit(io, json{{"listening", serve_opts.host}, {"port", port}});
        out.flush();
      });
    }
  } catch (const Error& e) {
    return fail(io, e);
  }
  return kUsage;
}

}  // namespace dyad::cli
