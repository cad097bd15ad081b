#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace symidx::cli {

/// Exit codes of `run`.
enum ExitCode : int { kSuccess = 0, kDomainError = 1, kUsageError = 2 };

/// Runs one invocation; args excludes the program name. Reports go to `out` (or --output),
/// usage messages to `err`, error objects to `out` as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Text rendering of a structured report, used by --format human.
std::string render_human(const std::string& json_document);

}  // namespace symidx::cli
