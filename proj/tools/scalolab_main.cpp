#include "scalolab/harness.hpp"

int main(int argc, char** argv) { return scalolab::harness::main_entry(argc, argv); }
