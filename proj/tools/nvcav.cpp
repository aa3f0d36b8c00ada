#include <iostream>

#include "nvcav/app/cli.hpp"

int main(int argc, char** argv) {
    return nvcav::app::run(argc, argv, std::cout, std::cerr);
}
