#include "evocode/cli.hpp"

int main(int argc, char** argv) { return evocode::cli::dispatch(argc, argv); }
