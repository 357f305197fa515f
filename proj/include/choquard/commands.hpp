#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace choquard {

/// Dispatches `choquard <subcommand> --config <path> [--out <dir>]`.
/// Subcommands: solve, classify, phase, check, convolve, bltest, vanish.
/// Returns 0 on success, 2 on validation errors, 3 on solver failure.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace choquard
