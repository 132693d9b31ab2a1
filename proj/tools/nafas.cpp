#include "nafas/cli.hpp"

int main(int argc, char** argv) { return nafas::run_cli(argc, argv); }
