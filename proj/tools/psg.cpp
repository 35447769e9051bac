#include <iostream>
#include <string>
#include <vector>

#include "psg/cli/cli.hpp"

int main(int argc, char** argv) {
    return psg::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
