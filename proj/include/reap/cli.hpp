#pragma once

#include <iosfwd>

namespace reap {

/// Entry point of the `reap` executable with injectable streams.
/// Subcommands: check, run, sweep. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace reap
