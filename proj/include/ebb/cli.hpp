// cli.hpp - command dispatch for the `ebb` tool.
//
// Usage: ebb <command> [--config PATH] [flags]
// Commands: validate, greens, classify, density, average, certify,
// scenario remark2 (the built-in scalar gap model). Exit codes: 0 success, 1 configuration error or usage,
// 2 unresolved numerics under --strict, 3 internal error.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ebb::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kUnresolved = 2, kInternal = 3 };

// CSV column contracts, one per command.
const std::vector<std::string>& csv_header(const std::string& command);

// args excludes the program name. Results go to `out` unless --out/output.path
// names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ebb::cli
