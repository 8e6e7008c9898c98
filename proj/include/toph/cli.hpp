#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "toph/errors.hpp"

namespace toph::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,         // bad flags or parameter values
  exit_bad_input = 2,     // unreadable or malformed input data
  exit_precondition = 3,  // valid input outside a solver's domain
};

int exit_code_for(Errc code) noexcept;

/// Runs one command. `args` excludes the program name, e.g.
/// {"truncate", "--input", "d.jsonl", "--output", "r.jsonl"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toph::cli
