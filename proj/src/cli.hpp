#pragma once

namespace dirac::cli {

// Full driver: parses flags, loads config and job, dispatches, prints the
// report, and maps exceptions to the documented exit codes.
int run_main(int argc, char** argv);

}  // namespace dirac::cli
