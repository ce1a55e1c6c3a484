#pragma once

#include <string>
#include <vector>

namespace drmpc::cli {

// Entry point shared by the binary and the test harnesses. `args` excludes
// the program name. Exit codes: 0 success, 1 configuration or usage error,
// 2 solver/runtime error.
int run(const std::vector<std::string>& args);

}  // namespace drmpc::cli
