#include "catamp/cli.hpp"

int main(int argc, char** argv) { return catamp::cli::run(argc, argv); }
