#include "ewc/cli.hpp"

int main(int argc, char** argv) { return ewc::cli::cli_main(argc, argv); }
