#include <string>
#include <vector>

#include "glmpss/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return glmpss::run_cli(args);
}
