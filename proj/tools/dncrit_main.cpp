#include <string>
#include <vector>

#include "dncrit/cli.hpp"

int main(int argc, char** argv) {
  return dncrit::cli::run(std::vector<std::string>(argv, argv + argc));
}
