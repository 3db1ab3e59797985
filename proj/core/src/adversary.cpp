#include "dyad/adversary.hpp"

#include <algorithm>
#include <numeric>

#include "dyad/criteria.hpp"
#include "dyad/error.hpp"

namespace dyad {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::invalid_argument, "chain spec: " + what);
}

std::vector<std::uint64_t> default_i_slots(int d) {
  std::vector<std::uint64_t> s(static_cast<std::size_t>(d - 1));
  std::iota(s.begin(), s.end(), std::uint64_t{0});
  return s;
}

}  // namespace

std::vector<bool> ChainSpec::side_choices() const {
  std::vector<bool> sides;
  for (int i = 1; i <= n + 1; ++i) sides.push_back(((anchor >> (i - 1)) & 1u) != 0);
  return sides;
}

ChainSpec ChainSpec::leftmost(int a, int n, int j) {
  ChainSpec s;
  s.a = a;
  s.n = n;
  s.j = j;
  return s;
}

ChainSpec ChainSpec::random(int a, int n, int j, std::mt19937_64& rng) {
  ChainSpec s = leftmost(a, n, j);
  require(a >= 1 && a < 16 && j - a >= 0 && j <= kMaxLevel, "levels out of range");
  s.anchor = std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << (j - a)) - 1)(rng);
  std::vector<std::uint64_t> leaves(std::size_t{1} << a);
  std::iota(leaves.begin(), leaves.end(), std::uint64_t{0});
  std::shuffle(leaves.begin(), leaves.end(), rng);
  s.i_slots.assign(leaves.begin(), leaves.end() - 1);
  std::sort(s.i_slots.begin(), s.i_slots.end());
  for (int i = 1; i <= n + 1; ++i) {
    const std::uint64_t width = std::uint64_t{1} << (a + i - 1);
    s.j_slots.push_back(std::uniform_int_distribution<std::uint64_t>(0, width - 1)(rng));
  }
  return s;
}

Colouring StageFamily::forced_colouring(int k) const {
  const IntervalSet& ck = C(k);
  std::vector<int> colours(ck.size(), 1);
  for (int i = 1; i < spec.d(); ++i) {
    colours[*ck.position(I(i))] = i + 1;
  }
  return Colouring(ck, spec.d(), std::move(colours));
}

StageFamily build_counterexample(const ChainSpec& spec) {
  const int a = spec.a;
  const int n = spec.n;
  const int j = spec.j;
  require(a >= 1, "a must be positive");
  require(n >= 2, "n must be at least 2 (eta = 1/n <= 1/2)");
  require(j >= n + a + 1, "j must satisfy j >= n + a + 1");
  require(j <= kMaxLevel, "j exceeds the maximum level");
  const int d = spec.d();
  require(spec.anchor < (std::uint64_t{1} << (j - a)), "anchor outside D_{j-a}");

  auto i_slots = spec.i_slots.empty() ? default_i_slots(d) : spec.i_slots;
  require(static_cast<int>(i_slots.size()) == d - 1, "need exactly d-1 slots for I");
  {
    auto sorted = i_slots;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "I slots must be distinct");
    require(sorted.empty() || sorted.back() < static_cast<std::uint64_t>(d), "I slot outside L_1");
  }
  auto j_slots = spec.j_slots.empty() ? std::vector<std::uint64_t>(static_cast<std::size_t>(n + 1), 0)
                                      : spec.j_slots;
  require(static_cast<int>(j_slots.size()) == n + 1, "need exactly n+1 slots for J");

  StageFamily fam;
  fam.spec = spec;
  fam.spec.i_slots = i_slots;
  fam.spec.j_slots = j_slots;

  DyadicInterval L{j - a, spec.anchor};
  fam.chain.push_back(L);
  for (int i = 1; i <= n + 1; ++i) {
    fam.brothers.push_back(brother(L));
    L = parent(L);
    fam.chain.push_back(L);
  }
  for (std::uint64_t slot : i_slots) {
    fam.i_intervals.push_back({j, (spec.anchor << a) + slot});
  }
  for (int i = 1; i <= n + 1; ++i) {
    const DyadicInterval P = fam.P(i);
    const int depth = j - P.level;
    require(j_slots[static_cast<std::size_t>(i - 1)] < (std::uint64_t{1} << depth), "J slot outside P_i");
    fam.j_intervals.push_back({j, (P.index << depth) + j_slots[static_cast<std::size_t>(i - 1)]});
  }

  for (int k = 0; k <= n; ++k) {
    std::vector<DyadicInterval> members(fam.i_intervals);
    for (int i = n - k + 1; i <= n + 1; ++i) members.push_back(fam.J(i));
    fam.stages.push_back(IntervalSet::from_intervals(j, members));
  }

  // Geometry, re-derived from containment rather than index arithmetic.
  for (int i = 1; i <= n + 1; ++i) {
    require(contains(fam.L(i + 1), fam.L(i)) && fam.L(i).level == j - a - i + 1, "chain is not nested");
    require(contains(fam.L(i + 1), fam.P(i)) && !contains(fam.L(i), fam.P(i)), "brother misplaced");
    require(contains(fam.P(i), fam.J(i)), "J_i outside P_i");
  }
  for (const auto& I : fam.i_intervals) require(contains(fam.L(1), I), "I outside L_1");
  for (int k = 0; k <= n; ++k) {
    require(static_cast<int>(fam.C(k).size()) == k + d, "|C(k)| != k + d");
    if (k > 0) require(fam.C(k).includes(fam.C(k - 1)), "stages not increasing");
  }

  std::vector<int> colours(fam.C(0).size(), 0);
  colours[*fam.C(0).position(fam.J(n + 1))] = 1;
  for (int i = 1; i < d; ++i) colours[*fam.C(0).position(fam.I(i))] = i + 1;
  fam.initial = Colouring(fam.C(0), d, std::move(colours));
  return fam;
}

bool CounterexampleReport::ok() const {
  const auto all = [](const std::vector<bool>& v) {
    return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
  };
  return stage0_classes == 1 &&
         std::all_of(unique_counts.begin(), unique_counts.end(), [](auto c) { return c == 1; }) &&
         all(forced_to_one) && all(matches_forced) && final_count == 0 && boundary_holds_relaxed &&
         !boundary_holds_strict && chain_profile_ok;
}

CounterexampleReport verify_counterexample(const StageFamily& fam, bool use_oracle,
                                           std::uint64_t budget) {
  const ChainSpec& spec = fam.spec;
  const int n = spec.n;
  const int d = spec.d();
  const HomogeneityParams params = spec.params();
  CounterexampleReport rep;

  // Stage 0.
  if (use_oracle) {
    OracleOptions opt;
    opt.canonical = true;
    opt.max_witnesses = 0;
    opt.budget = budget;
    rep.stage0_classes = *oracle_extensions(Colouring(fam.C(0), d), params, opt).canonical_count;
  } else {
    // |C(0)| = d inside L_{n+2}: hom1 makes every homogeneous colouring a
    // bijection, so there is one class iff the convention colouring passes.
    const bool inside = fam.C(0).count_within(fam.L(n + 2)) == fam.C(0).size();
    rep.stage0_classes = (inside && check_homogeneous(fam.initial, params)) ? 1 : 0;
  }

  // Extensions of `prev` by the single new interval J, with their count.
  auto extend = [&](const Colouring& prev, DyadicInterval J) {
    Colouring base = prev.extended_by(IntervalSet::from_intervals(spec.j, std::span(&J, 1)));
    if (use_oracle) {
      OracleOptions opt;
      opt.budget = budget;
      opt.max_witnesses = 1;
      auto r = oracle_extensions(base, params, opt);
      return std::pair{r.count, r.witnesses.empty() ? std::optional<Colouring>{}
                                                    : std::optional<Colouring>{r.witnesses.front()}};
    }
    std::uint64_t count = 0;
    std::optional<Colouring> first;
    for (int c = 1; c <= d; ++c) {
      Colouring cand = base.with(J, c);
      if (check_homogeneous(cand, params)) {
        if (!first) first = cand;
        ++count;
      }
    }
    return std::pair{count, first};
  };

  Colouring current = fam.initial;
  for (int k = 1; k <= n - 1; ++k) {
    const DyadicInterval J = fam.J(n - k + 1);
    auto [count, witness] = extend(current, J);
    rep.unique_counts.push_back(count);
    rep.forced_to_one.push_back(witness && witness->colour_of(J) == 1);
    rep.matches_forced.push_back(witness && *witness == fam.forced_colouring(k));
    current = witness ? *witness : fam.forced_colouring(k);
  }
  rep.final_count = extend(current, fam.J(1)).first;

  // Stage n-1 along the chain.
  rep.chain_profile_ok = true;
  for (int s = 3; s <= n + 2; ++s) {
    auto t = count_table(current, fam.L(s));
    std::vector<long long> expect(static_cast<std::size_t>(d), 1);
    expect[0] = s - 2;
    if (t.counts != expect) rep.chain_profile_ok = false;
  }

  const Colouring boundary =
      current.extended_by(IntervalSet::from_intervals(spec.j, std::vector{fam.J(1)})).with(fam.J(1), 1);
  auto t = count_table(boundary, fam.L(n + 2));
  rep.boundary_counts = t.counts;
  const HomogeneityParams relaxed(Rational(1, n + 1), d);
  rep.boundary_holds_relaxed = !test_counts(fam.L(n + 2), t.counts, relaxed).has_value();
  rep.boundary_holds_strict = !test_counts(fam.L(n + 2), t.counts, params).has_value();
  return rep;
}

std::vector<bool> previsibility_profile(const StageFamily& fam) {
  std::vector<bool> out;
  for (int k = 0; k < fam.spec.n; ++k) {
    const IntervalSet u = fam.C(k + 1).minus(fam.C(k));
    out.push_back(check_previsible(fam.C(k), u, fam.spec.d()).ok);
  }
  return out;
}

}  // namespace dyad
