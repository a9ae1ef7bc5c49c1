#ifndef FINORIENT_CLI_HPP
#define FINORIENT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace finorient::cli {

// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace finorient::cli

#endif
