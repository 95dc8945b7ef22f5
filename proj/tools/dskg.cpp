#include "cli_app.hpp"

int main(int argc, char** argv) { return dskg::cli::run(argc, argv); }
