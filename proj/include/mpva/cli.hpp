#ifndef MPVA_CLI_HPP
#define MPVA_CLI_HPP

#include <string>
#include <vector>

namespace mpva::cli {

// Commands: verify, hierarchy, lax-check, simulate, bracket, export.
// Exit codes: 0 all checks passed, 1 a verification failed, 2 usage error.
int dispatch(const std::vector<std::string>& args);

}  // namespace mpva::cli

#endif
