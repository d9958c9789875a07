#include "stackindex_cli/cli.hpp"

int main(int argc, char** argv) {
    return stackindex::cli::main(argc, argv);
}
