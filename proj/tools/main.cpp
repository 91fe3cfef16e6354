#include "vtmix/cli.hpp"

int main(int argc, char** argv) { return vtmix::run_cli(argc, argv); }
