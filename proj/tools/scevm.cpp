// SPDX-License-Identifier: Apache-2.0
#include <scevm/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return scevm::cli::run_cli(argc, argv, std::cout, std::cerr); }
