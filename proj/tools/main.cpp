#include "dyadic_cli.hpp"

int main(int argc, char** argv) { return dyadic::cli::run(argc, argv, std::cout, std::cerr); }
