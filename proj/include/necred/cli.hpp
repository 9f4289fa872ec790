#ifndef NECRED_CLI_HPP
#define NECRED_CLI_HPP

#include <string>
#include <vector>

namespace necred {

/// Runs one workbench command. Exit codes: 0 success (zero error where a
/// verification ran), 1 a verification found errors, 2 usage or input
/// problems, 3 an enumeration limit was exceeded.
int run_cli(const std::vector<std::string>& args);

}  // namespace necred

#endif
