#include "thermo/cli.hpp"

int main(int argc, char** argv) { return thermo::cli_main(argc, argv); }
