#include <iostream>

#include "ivteval/cli.hpp"

int main(int argc, char** argv) {
  return ivt::cli_main(argc, argv, std::cout, std::cerr);
}
