#include "commands.hpp"

int main(int argc, char** argv) { return normwave::cli::run(argc, argv); }
