#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpnp::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // I/O and other runtime failures
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitThreshold = 4,
};

/// Subcommands: gen, train, eval, active, verify-analytic, baseline.
int run_cli(int argc, const char* const* argv);
/// Same, with args excluding the program name and explicit output streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpnp::harness
