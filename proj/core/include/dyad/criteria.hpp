#pragma once

#include <optional>
#include <span>

#include "dyad/dyadic.hpp"
#include "dyad/error.hpp"

namespace dyad {

/// Outcome of a predicate scan. `violation` is set iff `ok` is false.
struct CheckResult {
  bool ok = true;
  std::optional<Violation> violation;

  explicit operator bool() const noexcept { return ok; }
};

/// (eta, d)-homogeneity of a total colouring.
///
/// Every dyadic L with |L| >= 2^-j is a testing interval. When |C n L| > d the
/// counts must satisfy eta * max <= min (equality allowed); otherwise every
/// colour may occur at most once. The scan is top-down and reports the first
/// failure in (level, index) order.
///
/// Throws Error(invalid_argument) for a partial colouring or a d mismatch.
[[nodiscard]] CheckResult check_homogeneous(const Colouring& col, const HomogeneityParams& params);

/// Same predicate restricted to the testing intervals inside `root`.
[[nodiscard]] CheckResult check_homogeneous_within(const Colouring& col,
                                                   const HomogeneityParams& params,
                                                   DyadicInterval root);

/// The hom1/hom2 test for a single testing interval given its colour counts.
[[nodiscard]] std::optional<Violation> test_counts(DyadicInterval L, std::span<const long long> counts,
                                                   const HomogeneityParams& params);

/// d-previsibility of the pair (c, u), checked for both child orientations.
///
/// For every L with L.level <= j - 1 and children (A, B) in either order:
/// |H n A| < d and |H n B| >= d must imply that B holds no u-member or no
/// c-member, where H = c u u.
///
/// Throws Error(invalid_argument) on a level mismatch or overlapping inputs.
[[nodiscard]] CheckResult check_previsible(const IntervalSet& c, const IntervalSet& u, int d);

/// Colour s cyclically from left to right: the l-th member gets
/// colour_order[l mod d]. The default order is 1, 2, ..., d.
[[nodiscard]] Colouring colour_modulo_d(const IntervalSet& s, int d,
                                        std::span<const int> colour_order = {});

}  // namespace dyad
