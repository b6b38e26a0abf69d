#include "cli.hpp"

int main(int argc, char** argv) { return taclab::cli::main_entry(argc, argv); }
