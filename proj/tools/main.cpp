#include <string>
#include <vector>

#include "prefixopt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return prefixopt::run_cli(std::move(args));
}
