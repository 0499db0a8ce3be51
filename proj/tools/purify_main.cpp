#include "purify/cli.hpp"

int main(int argc, char** argv) { return purify::cli::cli_main(argc, argv); }
