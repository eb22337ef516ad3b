#pragma once

#include <iostream>

namespace femkit {

/// Command-line entry point. Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
int cli_main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace femkit
