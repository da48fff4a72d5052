#include "starhardy/cli.hpp"

int main(int argc, char** argv) { return starhardy::cli::run(argc, argv); }
