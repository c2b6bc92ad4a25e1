#pragma once

#include <iostream>

namespace rcm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConfig = 3;

// Entry point of the rcm tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace rcm
