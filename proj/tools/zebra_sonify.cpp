#include "zebra/cli.hpp"

int main(int argc, char** argv) { return zebra::cli_main(argc, argv); }
