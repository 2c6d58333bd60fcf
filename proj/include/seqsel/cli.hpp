#pragma once

namespace seqsel {

// Entry point for the command-line tool; returns the process exit code.
// 0 success, 2 bad config or arguments, 3 non-convergence, 4 file I/O failure.
int run_cli(int argc, char** argv);

}  // namespace seqsel
