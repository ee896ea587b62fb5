#include "beamtraffic/cli.hpp"

int main(int argc, char** argv) { return beamtraffic::run_cli(argc, argv); }
