#include "lifetrack/harness.hpp"

int main(int argc, char** argv) { return lifetrack::cli(argc, argv); }
