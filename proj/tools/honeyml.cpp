#include "honeyml/cli.hpp"

int main(int argc, char** argv) { return honeyml::cli::run(argc, argv); }
