#include <iostream>

#include "kcp/cli.hpp"

int main(int argc, char** argv) { return kcp::cli::run(argc, argv, std::cout, std::cerr); }
