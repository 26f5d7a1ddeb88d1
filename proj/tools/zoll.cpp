#include "zoll/cli.hpp"

int main(int argc, char** argv) { return zoll::cli::run(argc, argv); }
