#include "swae/cli/commands.hpp"

int main(int argc, char** argv) { return swae::cli::run(argc, argv); }
