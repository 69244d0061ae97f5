#include <string>
#include <vector>

#include "hpin/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hpin::run_command(args);
}
