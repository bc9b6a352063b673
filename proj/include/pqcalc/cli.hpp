#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pqcalc {

/// Runs one pqcalc invocation (args exclude the program name).
/// Exit codes: 0 success, 1 invalid input or unsupported request,
/// 2 numerical non-convergence or a failed identity suite.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CommandOutput {
    int exit_code = 0;
    std::string out;
    std::string err;
};

CommandOutput run_command(const std::vector<std::string>& args);

/// Arguments that re-run the invocation recorded in a JSON output record.
std::vector<std::string> replay_args(const std::string& json_record);

}  // namespace pqcalc
