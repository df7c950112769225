#include "cgclosure/cli.hpp"

int main(int argc, char** argv) { return cgc::cli::run(argc, argv); }
