#include <string>
#include <vector>

#include "epochscope/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return epochscope::run(args);
}
