#include <iostream>

#include "geoalm/cli.hpp"

int main(int argc, char** argv) { return geoalm::cli::run(argc, argv, std::cout, std::cerr); }
