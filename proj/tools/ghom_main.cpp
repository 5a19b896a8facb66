#include "ghom/cli.hpp"

int main(int argc, char** argv) { return ghom::cli_main(argc, argv); }
