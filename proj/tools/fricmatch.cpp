#include "cli.hpp"

int main(int argc, char** argv) { return fricmatch::cli::run(argc, argv); }
