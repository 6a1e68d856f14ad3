#include "wtp/cli.hpp"

int main(int argc, char** argv) { return wtp::cli_main(argc, argv); }
