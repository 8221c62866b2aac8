#include <string>
#include <vector>

#include "graphon/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return graphon::cli::run(args);
}
