// Command-line front end: scan, oracle, compare, dos, peaks.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error, 3 comparison failure.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rodeo/harness.hpp"

namespace rodeo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitCompareFailed = 3;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses the --state grammar:
///   theta=X[,phi=Y][;theta=X[,phi=Y]...]   one entry per system qubit
///   bell=phi+|phi-|psi+|psi-
///   mix=phi:ALPHA | mix=psi:ALPHA
///   amps=FILE                               JSON [[re, im], ...]
/// Angles accept plain numbers or multiples of pi such as "pi/2", "2pi/5".
/// Throws std::invalid_argument on malformed input.
harness::StateSpec parse_state(const std::string& text);

double parse_angle(const std::string& text);

}  // namespace rodeo::cli
