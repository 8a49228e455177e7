#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kaf::cli {

// Runs one command. args excludes the program name. Interactive prompts
// (resource add only) read from `in`; results go to `out`, diagnostics to
// `err`. Returns the process exit status: 0 success, 1 domain error,
// 2 usage error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace kaf::cli
