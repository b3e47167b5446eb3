#include "cli_app.hpp"

int main(int argc, char** argv) { return hilbert::cli::run(argc, argv); }
