#include "cpx/cli.hpp"

int main(int argc, char** argv) { return cpx::cli::run_cli(argc, argv); }
