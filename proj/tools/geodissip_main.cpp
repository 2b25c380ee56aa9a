#include "geodissip/cli.hpp"

int main(int argc, char** argv) { return geodissip::cli::run_cli(argc, argv); }
