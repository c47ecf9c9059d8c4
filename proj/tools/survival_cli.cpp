#include <string>
#include <vector>

#include "survival/cli.hpp"

int main(int argc, char** argv) {
    return survival::cli::main(std::vector<std::string>(argv + 1, argv + argc));
}
