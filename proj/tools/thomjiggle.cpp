#include "thomjiggle/cli.hpp"

int main(int argc, char** argv) { return thom::run_cli(std::vector<std::string>(argv, argv + argc)); }
