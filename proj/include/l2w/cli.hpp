#pragma once

#include <iostream>

namespace l2w::cli {

// Entry point of the `l2w` tool. Exit codes: 0 all checks pass, 1 a verification,
// premise or I/O failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace l2w::cli
