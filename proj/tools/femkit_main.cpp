#include "femkit/cli.hpp"

int main(int argc, char** argv) { return femkit::cli_main(argc, argv); }
