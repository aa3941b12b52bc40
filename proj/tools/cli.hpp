#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace duplex::cli {

// Exit codes: 0 success, 1 runtime or data error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace duplex::cli
