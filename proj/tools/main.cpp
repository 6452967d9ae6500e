#include "kicked_top/cli.hpp"

int main(int argc, char** argv) { return kicked_top::cli::run(argc, argv); }
