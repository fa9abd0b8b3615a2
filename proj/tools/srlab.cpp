#include <iostream>

#include "srlab/cli.hpp"

int main(int argc, char** argv) { return srlab::run_cli(argc, argv, std::cerr); }
