#include <string>
#include <vector>

#include "trains/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return trains::dispatch(args);
}
