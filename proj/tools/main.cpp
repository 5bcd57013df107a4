#include "l2w/cli.hpp"

int main(int argc, char** argv) { return l2w::cli::run(argc, argv); }
