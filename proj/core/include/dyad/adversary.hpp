#pragma once

// The no-solution family: a chain L_1 c ... c L_{n+2} with brothers P_i, the
// leaves I_1..I_{d-1} inside L_1 and J_i inside P_i, and the collections
//
//   C(k) = {I_1, ..., I_{d-1}} u {J_{n-k+1}, ..., J_{n+1}},  k = 0..n,
//
// for d = 2^a and eta = 1/n. Each step forces the new J to colour 1 until the
// last one, which cannot be coloured at all.

#include <cstdint>
#include <random>
#include <vector>

#include "dyad/dyadic.hpp"
#include "dyad/error.hpp"
#include "dyad/oracle.hpp"

namespace dyad {

struct ChainSpec {
  int a = 1;
  int n = 2;
  int j = 4;
  /// Index of L_1 in D_{j-a}. The rest of the chain is its ancestors, so the
  /// side of every L_i inside L_{i+1} follows from the anchor bits.
  std::uint64_t anchor = 0;
  /// Offsets of I_1..I_{d-1} among the d leaves of L_1; empty means 0..d-2.
  std::vector<std::uint64_t> i_slots;
  /// Offset of J_i among the leaves of P_i, i = 1..n+1; empty means all 0.
  std::vector<std::uint64_t> j_slots;

  [[nodiscard]] int d() const noexcept { return 1 << a; }
  [[nodiscard]] Rational eta() const { return {1, n}; }
  [[nodiscard]] HomogeneityParams params() const { return {eta(), d()}; }
  /// Bit i-1 set when L_i is the right child of L_{i+1}, i = 1..n+1.
  [[nodiscard]] std::vector<bool> side_choices() const;

  /// Leftmost chain and leftmost slots.
  static ChainSpec leftmost(int a, int n, int j);
  /// Uniformly random anchor and slots.
  static ChainSpec random(int a, int n, int j, std::mt19937_64& rng);

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

struct StageFamily {
  ChainSpec spec;
  std::vector<DyadicInterval> chain;        // L_1..L_{n+2}
  std::vector<DyadicInterval> brothers;     // P_1..P_{n+1}
  std::vector<DyadicInterval> i_intervals;  // I_1..I_{d-1}
  std::vector<DyadicInterval> j_intervals;  // J_1..J_{n+1}
  std::vector<IntervalSet> stages;          // C(0)..C(n)
  /// J_{n+1} -> 1 and I_i -> i + 1.
  Colouring initial{IntervalSet(0), 1};

  // 1-based accessors matching the usual indexing.
  [[nodiscard]] DyadicInterval L(int i) const { return chain.at(static_cast<std::size_t>(i - 1)); }
  [[nodiscard]] DyadicInterval P(int i) const { return brothers.at(static_cast<std::size_t>(i - 1)); }
  [[nodiscard]] DyadicInterval I(int i) const { return i_intervals.at(static_cast<std::size_t>(i - 1)); }
  [[nodiscard]] DyadicInterval J(int i) const { return j_intervals.at(static_cast<std::size_t>(i - 1)); }
  [[nodiscard]] const IntervalSet& C(int k) const { return stages.at(static_cast<std::size_t>(k)); }

  /// The forced colouring of C(k): every J colour 1, I_{i-1} colour i.
  [[nodiscard]] Colouring forced_colouring(int k) const;
};

/// Validates the spec and lays out the family. Throws Error(invalid_argument).
[[nodiscard]] StageFamily build_counterexample(const ChainSpec& spec);

struct CounterexampleReport {
  /// Number of colourings of the blank C(0) up to colour permutation.
  std::uint64_t stage0_classes = 0;
  /// Extension counts for stages 1..n-1, and whether the witness coloured
  /// the new J with colour 1.
  std::vector<std::uint64_t> unique_counts;
  std::vector<bool> forced_to_one;
  /// Whether each witness equals forced_colouring(k).
  std::vector<bool> matches_forced;
  /// Extension count at stage n.
  std::uint64_t final_count = 0;
  /// Counts at L_{n+2} when J_1 takes colour 1, and hom2 there under
  /// 1/(n+1) and 1/n.
  std::vector<long long> boundary_counts;
  bool boundary_holds_relaxed = false;
  bool boundary_holds_strict = false;
  /// Stage n-1 shows counts (s-2, 1, ..., 1) at every L_s, s = 3..n+2.
  bool chain_profile_ok = false;

  /// Everything as the construction predicts.
  [[nodiscard]] bool ok() const;
};

/// Replays the stages. With `use_oracle` each stage is settled by
/// oracle_extensions; without it only the d choices for the new J are tried.
[[nodiscard]] CounterexampleReport verify_counterexample(const StageFamily& fam, bool use_oracle,
                                                         std::uint64_t budget = kDefaultSearchBudget);

/// check_previsible(C(k), C(k+1) \ C(k), d) for k = 0..n-1.
[[nodiscard]] std::vector<bool> previsibility_profile(const StageFamily& fam);

}  // namespace dyad
