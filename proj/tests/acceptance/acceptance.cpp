// Acceptance gate: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dyad/adversary.hpp"
#include "dyad/colourer.hpp"
#include "dyad/criteria.hpp"
#include "dyad/game.hpp"
#include "dyad/oracle.hpp"

using namespace dyad;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

IntervalSet random_subset(int j, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(p);
  std::vector<std::uint64_t> idx;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << j); ++k)
    if (keep(rng)) idx.push_back(k);
  return IntervalSet(j, std::move(idx));
}

// The (a, n) grid with 20 random placements per point.
std::vector<ChainSpec> grid_specs() {
  std::vector<ChainSpec> specs;
  std::mt19937_64 rng(2024);
  for (int a : {1, 2})
    for (int n : {2, 3, 4})
      for (int t = 0; t < 20; ++t) specs.push_back(ChainSpec::random(a, n, n + a + 1, rng));
  return specs;
}

std::string spec_name(const ChainSpec& s) {
  std::ostringstream os;
  os << "(a=" << s.a << ", n=" << s.n << ", j=" << s.j << ", anchor=" << s.anchor << ")";
  return os.str();
}

Outcome modulo_d() {
  std::size_t checked = 0, failures = 0;
  const HomogeneityParams half2(Rational(1, 2), 2);
  for (std::uint64_t mask = 0; mask < (1u << 16); ++mask) {
    std::vector<std::uint64_t> idx;
    for (std::uint64_t k = 0; k < 16; ++k)
      if (mask >> k & 1u) idx.push_back(k);
    failures += check_homogeneous(colour_modulo_d(IntervalSet(4, idx), 2), half2) ? 0 : 1;
    ++checked;
  }
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10'000; ++t) {
    const int d = 2 + t % 3;
    auto s = random_subset(6, std::uniform_real_distribution<double>(0.05, 0.95)(rng), rng);
    failures += check_homogeneous(colour_modulo_d(s, d), HomogeneityParams(Rational(1, 2), d)) ? 0 : 1;
    ++checked;
  }
  return {failures == 0, std::to_string(checked) + " subsets, " + std::to_string(failures) + " failures"};
}

Outcome theorem_one() {
  std::mt19937_64 rng(7);
  const Rational etas[] = {Rational(1, 2), Rational(1, 3)};
  std::size_t instances = 0, oracle_checked = 0, nonempty_u = 0;
  std::vector<std::string> failures;
  while (instances < 1200) {
    const int j = 4 + static_cast<int>(rng() % 3);
    const int d = 2 + static_cast<int>(rng() % 3);
    const Rational eta = etas[rng() % 2];
    const HomogeneityParams params(eta, d);
    const auto c = random_subset(j, std::uniform_real_distribution<double>(0.05, 0.7)(rng), rng);
    const Colouring c_col = colour_modulo_d(c, d);
    // Grow U by rejection sampling; keep it small where the oracle runs.
    const std::size_t cap = j <= 5 ? 6 : 64;
    std::vector<std::uint64_t> free;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << j); ++k)
      if (!c.contains({j, k})) free.push_back(k);
    std::shuffle(free.begin(), free.end(), rng);
    const std::size_t target = std::uniform_int_distribution<std::size_t>(1, cap)(rng);
    std::vector<std::uint64_t> u;
    for (auto k : free) {
      if (u.size() >= target) break;
      auto trial = u;
      trial.push_back(k);
      if (check_previsible(c, IntervalSet(j, trial), d)) u = std::move(trial);
    }
    const IntervalSet us(j, u);
    ++instances;
    nonempty_u += us.empty() ? 0 : 1;
    try {
      const Colouring out = extend_colouring(c_col, us, params);
      const bool preserved = out.restricted_to(c) == c_col && out.base() == c.united(us);
      const bool homogeneous = check_homogeneous(out, params).ok;
      bool listed = true;
      if (j <= 5) {
        OracleOptions opts;
        opts.max_witnesses = 1u << 16;
        const auto rep = oracle_extensions(c_col.extended_by(us), params, opts);
        listed = std::find(rep.witnesses.begin(), rep.witnesses.end(), out) != rep.witnesses.end();
        ++oracle_checked;
      }
      if (!preserved || !homogeneous || !listed) {
        failures.push_back("j=" + std::to_string(j) + " d=" + std::to_string(d) + " |U|=" +
                           std::to_string(us.size()));
      }
    } catch (const std::exception& e) {
      failures.push_back(e.what());
    }
  }
  std::string detail = std::to_string(instances) + " instances (" + std::to_string(nonempty_u) +
                       " with U nonempty, " + std::to_string(oracle_checked) + " oracle-checked), " +
                       std::to_string(failures.size()) + " failures";
  if (!failures.empty()) detail += "; first: " + failures.front();
  return {failures.empty(), detail};
}

Outcome stage_grid(const std::vector<ChainSpec>& specs) {
  std::size_t failures = 0;
  std::string first;
  for (const auto& spec : specs) {
    const auto fam = build_counterexample(spec);
    const auto rep = verify_counterexample(fam, true, kDefaultSearchBudget);
    const bool forced =
        std::all_of(rep.unique_counts.begin(), rep.unique_counts.end(), [](auto c) { return c == 1; }) &&
        std::all_of(rep.forced_to_one.begin(), rep.forced_to_one.end(), [](bool b) { return b; }) &&
        std::all_of(rep.matches_forced.begin(), rep.matches_forced.end(), [](bool b) { return b; }) &&
        static_cast<int>(rep.unique_counts.size()) == spec.n - 1;
    const bool ok = rep.stage0_classes == 1 && forced && rep.final_count == 0 && rep.boundary_holds_relaxed &&
                    !rep.boundary_holds_strict;
    if (!ok) {
      ++failures;
      if (first.empty()) first = spec_name(spec);
    }
  }
  std::string detail = std::to_string(specs.size()) + " placements, " + std::to_string(failures) + " failures";
  if (!first.empty()) detail += "; first: " + first;
  return {failures == 0, detail};
}

Outcome profile_all_false(const std::vector<ChainSpec>& specs) {
  std::size_t failures = 0;
  for (const auto& spec : specs) {
    const auto profile = previsibility_profile(build_counterexample(spec));
    const bool all_false = static_cast<int>(profile.size()) == spec.n &&
                           std::none_of(profile.begin(), profile.end(), [](bool b) { return b; });
    failures += all_false ? 0 : 1;
  }
  return {failures == 0, std::to_string(specs.size()) + " placements, " + std::to_string(failures) + " failures"};
}

Outcome split_halves() {
  // d = 3, r = 1: L = [0,1]; C has one interval per half (colours 1 and 2),
  // U one blank interval per half.
  const HomogeneityParams params(Rational(1, 2), 3);
  const Colouring c(IntervalSet(3, {0, 4}), 3, {1, 2});
  const IntervalSet u(3, {1, 5});
  const Colouring out = extend_colouring(c, u, params);
  const bool good = check_homogeneous(out, params).ok && out.restricted_to(c.base()) == c;
  const bool colour3 = out.colour_of({3, 1}) == 3 && out.colour_of({3, 5}) == 3;
  const Colouring merged(IntervalSet(3, {0, 1, 4, 5}), 3, {1, 2, 2, 1});
  const auto r = check_homogeneous(merged, params);
  const bool merged_fails = !r.ok && count_table(merged, {0, 0}).counts == std::vector<long long>{2, 2, 0};
  std::string detail = std::string("extension ") + (good ? "homogeneous" : "NOT homogeneous") +
                       (colour3 ? " (U -> 3, 3)" : " (U not coloured 3, 3)") + ", per-child merge " +
                       (merged_fails ? "rejected at counts (2,2,0)" : "NOT rejected");
  return {good && colour3 && merged_fails, detail};
}

Outcome restricted_games() {
  std::mt19937_64 rng(99);
  std::size_t games = 0, stages = 0, losses = 0, bad_stages = 0, errors = 0;
  std::string first;
  for (int g = 0; g < 100; ++g) {
    GameConfig cfg;
    cfg.j = 3 + g % 4;
    const int d = 2 + g % 3;
    cfg.params = HomogeneityParams(g % 2 ? Rational(1, 3) : Rational(1, 2), d);
    cfg.restricted = true;
    cfg.initial = colour_modulo_d(random_subset(cfg.j, std::uniform_real_distribution<double>(0, 0.5)(rng), rng), d);
    try {
      auto s = new_game(cfg);
      while (!s.finished()) s = respond_B(apply_move_A(s, random_move_A(s, rng)));
      ++games;
      if (s.status() != GameStatus::B_wins) {
        ++losses;
        if (first.empty()) first = "game " + std::to_string(g) + " ended " + to_string(s.status());
      }
      for (const auto& rec : s.history()) {
        ++stages;
        if (!check_homogeneous(rec.colouring, cfg.params)) ++bad_stages;
      }
    } catch (const std::exception& e) {
      ++errors;
      if (first.empty()) first = e.what();
    }
  }
  std::string detail = std::to_string(games) + " games, " + std::to_string(stages) + " stages, " +
                       std::to_string(losses) + " B losses, " + std::to_string(bad_stages) +
                       " inhomogeneous stages, " + std::to_string(errors) + " errors";
  if (!first.empty()) detail += "; first: " + first;
  return {games == 100 && losses == 0 && bad_stages == 0 && errors == 0, detail};
}

Outcome scripted_playback(const std::vector<ChainSpec>& specs) {
  std::size_t failures = 0;
  std::string first;
  for (const auto& spec : specs) {
    try {
      auto s = new_game(counterexample_config(spec));
      while (s.status() == GameStatus::awaiting_A) {
        const auto hint = hint_A(s);
        if (!hint) break;
        s = respond_B(apply_move_A(s, *hint));
      }
      if (s.status() != GameStatus::A_wins || s.stage() != spec.n) {
        ++failures;
        if (first.empty()) first = spec_name(spec) + " ended " + to_string(s.status()) + " at stage " +
                                   std::to_string(s.stage());
      }
    } catch (const std::exception& e) {
      ++failures;
      if (first.empty()) first = e.what();
    }
  }
  std::string detail = std::to_string(specs.size()) + " chains, " + std::to_string(failures) + " failures";
  if (!first.empty()) detail += "; first: " + first;
  return {failures == 0, detail};
}

}  // namespace

int main() {
  const auto specs = grid_specs();
  struct Criterion {
    const char* name;
    double limit_seconds;  // 0: no runtime target
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"modulo-d colouring is always homogeneous", 30, modulo_d},
      {"constructive colouring on random previsible instances", 120, theorem_one},
      {"staged family grid: unique forced stages, no final extension, eta boundary", 120,
       [&] { return stage_grid(specs); }},
      {"staged family grid: no stage pair is previsible", 0, [&] { return profile_all_false(specs); }},
      {"split-halves regression (d = 3)", 0, split_halves},
      {"restricted self-play: engine B never loses", 120, restricted_games},
      {"scripted playback: A wins at exactly stage n", 0, [&] { return scripted_playback(specs); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << secs << " s";
    if (c.limit_seconds > 0) time << " / " << c.limit_seconds << " s";
    std::cout << (pass ? "PASS" : "FAIL") << "  " << c.name << ": " << o.detail << " [" << time.str() << "]"
              << (in_time ? "" : " (over time)") << std::endl;
  }
  return failed;
}
