#include "obd/cli.hpp"

int main(int argc, char** argv) { return obd::run_cli(argc, argv); }
