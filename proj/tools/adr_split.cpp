#include "adrsplit/cli.hpp"

int main(int argc, char** argv) { return adrsplit::cli::main(argc, argv); }
