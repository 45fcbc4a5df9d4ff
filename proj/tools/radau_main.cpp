#include <string>
#include <vector>

#include "radau/cli.hpp"

int main(int argc, char** argv) {
  return radau::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
