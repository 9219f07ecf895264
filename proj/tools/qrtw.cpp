#include "qrtw/cli.hpp"

int main(int argc, char** argv) { return qrtw::cli::main(argc, argv); }
