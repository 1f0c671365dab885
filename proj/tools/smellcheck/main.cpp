#include "smellcheck/cli.hpp"

int main(int argc, char** argv) { return smellcheck::cli::run(argc, argv); }
