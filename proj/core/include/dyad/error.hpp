#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dyad/dyadic.hpp"

namespace dyad {

enum class ViolationKind { hom1, hom2, previs };

/// A failed testing interval, with enough detail to re-check it from the inputs.
///
/// For `hom1` the offending colour and its count (>= 2) are filled in. For
/// `hom2` the extreme counts and the first colours attaining them. For
/// `previs` the testing interval is the parent L and `heavy_child` is the
/// child that played the role of L'' (the one with at least d members).
struct Violation {
  ViolationKind kind = ViolationKind::hom1;
  DyadicInterval testing_interval;

  int colour = 0;
  long long count = 0;

  long long max_count = 0;
  long long min_count = 0;
  int argmax_colour = 0;
  int argmin_colour = 0;

  DyadicInterval heavy_child;

  friend bool operator==(const Violation&, const Violation&) = default;
};

[[nodiscard]] std::string to_string(ViolationKind kind);
[[nodiscard]] std::optional<ViolationKind> parse_violation_kind(std::string_view s);
[[nodiscard]] std::string describe(const Violation& v);

enum class ErrorCode {
  invalid_argument,  // malformed input, level mismatch, out-of-range values
  precondition,      // inputs well-formed but outside an operation's contract
  budget_exceeded,   // exhaustive search would exceed the configured budget
  illegal_move,      // game move rejected; state unchanged
  out_of_turn,       // game operation called in the wrong status
  internal,          // self-check failed; indicates a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<Violation> violation = std::nullopt)
      : std::runtime_error(what), code_(code), violation_(std::move(violation)) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const std::optional<Violation>& violation() const noexcept {
    return violation_;
  }

 private:
  ErrorCode code_;
  std::optional<Violation> violation_;
};

[[nodiscard]] std::string to_string(ErrorCode code);

}  // namespace dyad
