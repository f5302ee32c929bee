#include <iostream>

#include "ebcommit/cli.hpp"

int main(int argc, char** argv) { return ebc::cli::run(argc, argv, std::cout, std::cerr); }
