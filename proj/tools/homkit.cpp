#include "homkit/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return homkit::run(argc, argv, std::cout, std::cerr); }
