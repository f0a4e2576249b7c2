#include "funcspace/cli.hpp"

int main(int argc, char** argv) { return funcspace::run_cli(argc, argv); }
