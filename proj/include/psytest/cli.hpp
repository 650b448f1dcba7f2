#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psytest::gateway {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1, ///< validation failures, I/O errors, rejected edits
    exit_usage = 2,
    exit_interrupted = 3, ///< `run` ended before the last item; nothing was logged
};

/// Entry point of the `psytest` binary with injectable streams. `args`
/// excludes the program name. `serve` blocks until the server stops.
int run_cli(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err);

} // namespace psytest::gateway
