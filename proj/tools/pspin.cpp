#include <iostream>

#include "pspin/cli.hpp"

int main(int argc, char** argv) {
  int code = 0;
  const auto config = pspin::cli::parse_args(argc, argv, &code, std::cout, std::cerr);
  if (!config) return code;
  return pspin::cli::run(*config, std::cerr);
}
