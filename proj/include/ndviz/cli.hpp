#pragma once

#include <ostream>

namespace ndviz {

namespace exit_code {
inline constexpr int kAccept = 0;
inline constexpr int kReject = 1;
inline constexpr int kCutoff = 2;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;  // malformed or invalid machine / predicate
inline constexpr int kNoInput = 66;    // unreadable file
inline constexpr int kSoftware = 70;
}  // namespace exit_code

/// Entry point of the `ndviz` tool. Subcommands: apply, trace, viz, graph,
/// inv-check, serve. Normal output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ndviz
