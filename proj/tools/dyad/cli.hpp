#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dyad/dyadic.hpp"
#include "dyad/error.hpp"

namespace dyad::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFalse = 1;
inline constexpr int kUsage = 2;

/// Runs one command line (args[0] is the program name). Input files named as
/// "-" or omitted are read from `in`; JSON goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// ASCII rendering of a collection: member counts per node for the upper
/// levels, then one two-character cell per leaf ("." absent, "_" blank, else
/// the colour). The testing interval of `marked`, if any, is flagged with '*'.
std::string render_tree(const Colouring& col, const std::optional<Violation>& marked = std::nullopt);

}  // namespace dyad::cli
