#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace colombeau {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitNotAssociated = 1,
  kExitUsage = 2,
  kExitNonModerate = 3,
  kExitIndeterminate = 4,
  kExitNumerical = 5,
};

/// Run one subcommand; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace colombeau
