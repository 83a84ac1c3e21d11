#include <contour/cli.hpp>

int main(int argc, char** argv) { return contour::run_cli(argc, argv); }
