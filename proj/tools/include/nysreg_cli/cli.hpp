#ifndef NYSREG_CLI_CLI_HPP
#define NYSREG_CLI_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace nysreg::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2, numerical_error = 3 };

/// Runs one command. `args` excludes the program name. Primary results go to
/// `out` unless --out names a file; diagnostics and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nysreg::cli

#endif  // NYSREG_CLI_CLI_HPP
