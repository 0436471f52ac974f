#pragma once

#include <iosfwd>

namespace qos {

// Experiment harness entry point. Subcommands: calibrate, quote, sweep,
// serve. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace qos
