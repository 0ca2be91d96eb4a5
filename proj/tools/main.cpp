#include "synthbench/cli.hpp"

int main(int argc, char** argv) { return synthbench::run_cli(argc, argv); }
