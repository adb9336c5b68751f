#include "cli.hpp"

int main(int argc, char** argv) { return dirac::cli::run_main(argc, argv); }
