#include <redist/cli.hpp>

int main(int argc, char** argv) { return redist::cli::main(argc, argv); }
