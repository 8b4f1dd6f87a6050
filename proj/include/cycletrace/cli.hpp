#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cycletrace
{

/// Process exit codes of the command line tool.
enum ExitCode : int
{
    kExitOk = 0,
    kExitVerifyFailed = 1,
    kExitCollision = 2,
    kExitSquare = 3,
    kExitInvalid = 4,
};

/// Entry point of the `cycletrace` tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cycletrace
