#include "mpnp/harness/cli.hpp"

int main(int argc, char** argv) { return mpnp::harness::run_cli(argc, argv); }
