#include "smt/cli.hpp"

int main(int argc, char** argv) { return smt::run_cli(argc, argv); }
