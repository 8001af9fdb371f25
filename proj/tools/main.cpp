#include "mocondg/cli.hpp"

int main(int argc, char** argv) { return mocondg::run_cli(argc, argv); }
