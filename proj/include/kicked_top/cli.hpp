#ifndef KICKED_TOP_CLI_HPP
#define KICKED_TOP_CLI_HPP

#include "kicked_top/manifest.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace kicked_top::cli
{
enum ExitCode : int
{
    ok         = 0,
    validation = 1,
    numerical  = 2
};

/// Runs one validated manifest, writing its files below `m.out` and a
/// one-line summary to `log`.
void execute(const RunManifest& m, std::ostream& log);

/// Entry point: `kicked-top <subcommand> [flags]`. Flags override values
/// loaded with --manifest.
int run(int argc, const char* const* argv);
int run(const std::vector< std::string >& args);
} // namespace kicked_top::cli

#endif // KICKED_TOP_CLI_HPP
