#pragma once

// Consistent colouring: extend a homogeneous colouring of C to C u U when the
// pair (C, U) is d-previsible.
//
// The construction runs backwards over tree levels, from s = j - alpha (where
// 2^alpha <= d < 2^(alpha+1)) up to the root. After stage s, every K in D_s
// has U n K fully coloured iff |H n K| >= d and C n K is nonempty; otherwise
// U n K is still blank. Each parent is resolved by one of the cases below,
// chosen from the counts in its two children L' (left) and L'' (right).

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "dyad/criteria.hpp"
#include "dyad/dyadic.hpp"
#include "dyad/error.hpp"

namespace dyad {

enum class CaseLabel {
  start_blank,      // I.1
  start_complete,   // I.2
  blank,            // II.1
  both_heavy,       // II.2.A.1
  both_light,       // II.2.A.2
  left_light,       // II.2.A.3: |H n L'| < d <= |H n L''|
  right_light,      // II.2.A.4
  seeded_both_heavy,   // II.2.B.1: C n L' empty, both children >= d
  seeded_both_light,   // II.2.B.2
  seeded_empty_light,  // II.2.B.3: the C-free child is light
  seeded_empty_heavy,  // II.2.B.4: the C-free child is heavy, the other light
};

/// Short proof-case tag, e.g. "II.2.A.3".
[[nodiscard]] std::string to_string(CaseLabel label);

/// Children counts (|C n L'|, |C n L''|, |H n L'|, |H n L''|).
struct ChildCounts {
  long long c_left = 0;
  long long c_right = 0;
  long long h_left = 0;
  long long h_right = 0;
};

struct CaseDispatch {
  CaseLabel label = CaseLabel::blank;
  /// Set for the II.2.B cases when C n L'' is the empty cut: the label then
  /// refers to the reflected node, with the roles of L' and L'' exchanged.
  bool mirrored = false;
};

/// Pure case selection for an inductive step. Throws Error(invalid_argument)
/// when a C-count exceeds its H-count or a count is negative.
[[nodiscard]] CaseDispatch dispatch_case(const ChildCounts& counts, int d);

/// One resolved node, for diagnostics and instrumentation.
struct CaseTrace {
  DyadicInterval node;
  CaseLabel label = CaseLabel::blank;
  bool mirrored = false;
};

struct ColourerOptions {
  /// Re-scan every newly coloured subtree and assert the stage invariant
  /// after each level. Cheap enough to leave on.
  bool self_check = true;
  /// Optional observer receiving every resolved node.
  std::function<void(const CaseTrace&)> on_case;
};

/// Colours U so that the union is (eta, d)-homogeneous and agrees with
/// c_col on C.
///
/// Preconditions (Error(precondition) with the Violation when broken):
/// c_col is total and (eta, d)-homogeneous; (C, U) is d-previsible.
/// Error(invalid_argument) for level mismatch or overlap, and
/// Error(internal) if a self-check fails.
[[nodiscard]] Colouring extend_colouring(const Colouring& c_col, const IntervalSet& u,
                                         const HomogeneityParams& params,
                                         const ColourerOptions& options = {});

}  // namespace dyad
