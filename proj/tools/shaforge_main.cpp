#include "shaforge/cli.hpp"

int main(int argc, char** argv) { return shaforge::cli::run(argc, argv); }
