#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shapekit::cli {

enum Exit : int { kOk = 0, kRejected = 2, kBudget = 3, kUsage = 64 };

/// Runs one subcommand; the report goes to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shapekit::cli
