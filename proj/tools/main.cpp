#include "crosslink/cli.hpp"

int main(int argc, char** argv) { return crosslink::cli::run(argc, argv); }
