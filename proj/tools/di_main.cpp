#include "di/cli.hpp"

int main(int argc, char** argv) { return di::cli::run(argc, argv); }
