#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace graphon::cli {

// Exit codes of run().
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

// Runs one subcommand. args excludes the program name. JSON results go to
// out, diagnostics to err; `--in -` reads JSON from in.
int run(const std::vector<std::string>& args, std::istream& in = std::cin,
        std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace graphon::cli
