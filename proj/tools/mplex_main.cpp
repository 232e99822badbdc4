#include "mplex/cli.hpp"

int main(int argc, char** argv) { return mplex::run_cli(argc, argv); }
