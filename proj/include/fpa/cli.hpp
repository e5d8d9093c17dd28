#pragma once

// The fpa command line: validate, find-fixed, invariant-chain, lemma-check,
// gen-example. Exit codes: 0 success, 1 validation failure, 2 window too
// small for a result, 3 I/O, usage or parse error.

#include <iosfwd>
#include <string>
#include <vector>

#include "fpa/error.hpp"

namespace fpa::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 1,
  kWindowFailure = 2,
  kInputFailure = 3,
};

int exit_code_for(ErrorKind kind) noexcept;

/// Runs one command; `args` excludes the program name. Human-readable output
/// goes to `out`, diagnostics to `err`, the JSON report to --json PATH.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fpa::cli
