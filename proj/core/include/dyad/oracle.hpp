#pragma once

// Exhaustive ground truth for the consistent-colouring problem: counts the
// (eta, d)-homogeneous total colourings that agree with a partial one.

#include <cstdint>
#include <optional>
#include <vector>

#include "dyad/dyadic.hpp"
#include "dyad/error.hpp"

namespace dyad {

inline constexpr std::uint64_t kDefaultSearchBudget = 10'000'000;

struct OracleOptions {
  /// Stop counting once this many extensions were found.
  std::uint64_t limit = std::uint64_t{1} << 62;
  /// Keep at most this many witnesses.
  std::size_t max_witnesses = 16;
  /// Maximum number of search nodes visited before Error(budget_exceeded).
  std::uint64_t budget = kDefaultSearchBudget;
  /// Also count colour-permutation classes (only meaningful for an
  /// entirely uncoloured base).
  bool canonical = false;
};

struct ExtensionReport {
  std::uint64_t count = 0;
  /// True when the search stopped at `limit`: count is then a lower bound.
  bool at_least = false;
  std::vector<Colouring> witnesses;
  std::optional<std::uint64_t> canonical_count;
  std::uint64_t visited = 0;
};

/// Depth-first search over the uncoloured members, left to right, colours
/// ascending. A testing interval is checked exactly as soon as its last
/// member is assigned; partial cuts are pruned by hom1 (a colour already
/// seen twice in a cut of at most d) and by the bound eta * max <= min + remaining.
/// Every accepted leaf is re-verified with check_homogeneous.
[[nodiscard]] ExtensionReport oracle_extensions(const Colouring& base,
                                                const HomogeneityParams& params,
                                                const OracleOptions& options = {});

/// Relabel colours by first appearance from the left. Throws for partial input.
[[nodiscard]] Colouring canonicalize(const Colouring& col);

}  // namespace dyad
