#include "mmd/cli.hpp"

int main(int argc, char** argv) { return mmd::run_cli(argc, argv); }
