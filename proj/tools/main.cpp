#include "depwatch/cli.hpp"

int main(int argc, char** argv) { return depwatch::cli::main(argc, argv); }
