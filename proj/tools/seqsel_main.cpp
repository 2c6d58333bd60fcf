#include "seqsel/cli.hpp"

int main(int argc, char** argv) { return seqsel::run_cli(argc, argv); }
