#include <cgra/cli.hpp>

int main(int argc, char** argv) { return cgra::run_command(argc, argv); }
