#include <string>
#include <vector>

#include "pwlc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pwlc::cli::run(args);
}
