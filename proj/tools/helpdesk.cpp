#include <iostream>

#include "helpdesk/cli.hpp"

int main(int argc, char** argv) { return helpdesk::cli::run(argc, argv, std::cout, std::cerr); }
