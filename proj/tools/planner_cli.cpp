#include "planner/cli.hpp"

int main(int argc, char** argv) { return planner::cli::run(argc, argv); }
