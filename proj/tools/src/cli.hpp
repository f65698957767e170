#pragma once

#include <string>
#include <vector>

namespace tsreason::cli {

/// Entry point shared by the binary and the acceptance suite.
/// `args` excludes the program name. Exit codes: 0 success, 1 a plan
/// validation found errors, 2 usage error, 3 environment or runtime failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace tsreason::cli
