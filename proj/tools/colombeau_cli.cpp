#include "colombeau/cli.hpp"

int main(int argc, char** argv) { return colombeau::run_cli(argc, argv); }
