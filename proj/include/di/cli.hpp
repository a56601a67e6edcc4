#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace di::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalidInput = 2;

// Runs one subcommand. `args` excludes the program name, e.g.
// {"pipeline", "--config", "run.conf"}. Failures are reported on `err` as a
// single JSON line and mapped to the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace di::cli
