#include "nlf/cli.hpp"

int main(int argc, char** argv) { return nlf::run_cli(argc, argv); }
