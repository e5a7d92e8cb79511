#pragma once

namespace mmd {

// Command-line entry point (wrapped by tools/mmd_main.cpp and exercised
// directly by the tests). Exit codes: 0 success, 1 failed check, 2 usage or
// input error, 3 degenerate statistic.
int run_cli(int argc, const char* const* argv);

}  // namespace mmd
