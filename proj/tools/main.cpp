#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    mothership::cli::configure_logging();
    return mothership::cli::run({argv, argv + argc}, std::cout, std::cerr);
}
