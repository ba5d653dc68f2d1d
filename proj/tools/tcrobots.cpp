#include "tcrobots/cli.hpp"

int main(int argc, char** argv) { return tcrobots::cli::run(argc, argv); }
