#include "rcm/cli/commands.hpp"

int main(int argc, char** argv) { return rcm::run_cli(argc, argv); }
