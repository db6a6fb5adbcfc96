#include "cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return vponset::cli::run({argv, argv + argc}, std::cout, std::cerr);
}
