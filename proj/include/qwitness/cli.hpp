#pragma once

// Command-line front end. Exit codes:
//   0   success; POSITIVE or NULL_ANTICOMMUTATOR verdict
//   1   internal error
//   2   invalid input (I/O, parse, validation, dimension)
//   10  NONPOSITIVE_WITNESSED
//   11  commuting inputs
//   12  degenerate spectrum
//   13  boundary / condition unreachable / iteration cap
//   14  zero-probability outcome
//   15  capacity exceeded
//   16  numerical failure (convergence, cross-check disagreement)

#include <ostream>

namespace qwitness {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kInput = 2;
inline constexpr int kWitnessed = 10;
inline constexpr int kCommuting = 11;
inline constexpr int kDegenerate = 12;
inline constexpr int kUnreachable = 13;
inline constexpr int kNullOutcome = 14;
inline constexpr int kCapacity = 15;
inline constexpr int kNumerical = 16;
}  // namespace exit_code

/// Reports go to out, diagnostics to err. Never calls exit().
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qwitness
