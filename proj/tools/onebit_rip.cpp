#include "onebit/cli/app.hpp"

int main(int argc, char** argv) { return onebit::cli::run(argc, argv); }
