#ifndef TATE_CLI_HPP
#define TATE_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace tate {

// Exit codes: 0 success, 1 contract error, 2 I/O, parse or usage error.
// `args` excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace tate

#endif
