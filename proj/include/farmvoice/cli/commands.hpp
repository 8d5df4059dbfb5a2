#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fv::cli {

/// Stable exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;     // input, config, bind or store errors
inline constexpr int kExitInternal = 2;  // anything unexpected

/// Parses the command line and dispatches to a subcommand:
/// evaluate, classify, inject, vocabulary, serve.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fv::cli
