#include "dyad/error.hpp"

namespace dyad {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::hom1: return "HOM1";
    case ViolationKind::hom2: return "HOM2";
    case ViolationKind::previs: return "PREVIS";
  }
  return "?";
}

std::optional<ViolationKind> parse_violation_kind(std::string_view s) {
  if (s == "HOM1") return ViolationKind::hom1;
  if (s == "HOM2") return ViolationKind::hom2;
  if (s == "PREVIS") return ViolationKind::previs;
  return std::nullopt;
}

std::string describe(const Violation& v) {
  const std::string at = to_string(v.testing_interval);
  switch (v.kind) {
    case ViolationKind::hom1:
      return "HOM1 at " + at + ": colour " + std::to_string(v.colour) + " occurs " +
             std::to_string(v.count) + " times in a cut of at most d intervals";
    case ViolationKind::hom2:
      return "HOM2 at " + at + ": max " + std::to_string(v.max_count) + " (colour " +
             std::to_string(v.argmax_colour) + ") vs min " + std::to_string(v.min_count) +
             " (colour " + std::to_string(v.argmin_colour) + ")";
    case ViolationKind::previs:
      return "PREVIS at " + at + ": child " + to_string(v.heavy_child) +
             " holds >= d intervals mixing C and U while its brother holds < d";
  }
  return at;
}

std::string to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::illegal_move: return "illegal_move";
    case ErrorCode::out_of_turn: return "out_of_turn";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace dyad
