#include "polystar/cli.hpp"

int main(int argc, char** argv) { return polystar::cli::run(argc, argv); }
