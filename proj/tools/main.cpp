#include <string>
#include <vector>

#include "vpipe/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return vpipe::cli::run_cli(args);
}
