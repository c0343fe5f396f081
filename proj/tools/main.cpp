#include "cli.hpp"

int main(int argc, char** argv) { return uaext::cli::run(argc, argv); }
