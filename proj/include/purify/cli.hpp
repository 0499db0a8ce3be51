#pragma once

namespace purify::cli {

// Full command-line entry point. Returns the process exit code:
//   0 success, 2 configuration/validation errors, 3 numerical failures,
//   4 ensemble degeneracy (too many samples lost to vanishing branches).
int cli_main(int argc, char** argv);

}  // namespace purify::cli
