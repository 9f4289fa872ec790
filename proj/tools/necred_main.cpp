#include "necred/cli.hpp"

int main(int argc, char** argv) {
    return necred::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
