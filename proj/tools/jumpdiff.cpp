#include "jumpdiff/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return jumpdiff::run_cli(argc, argv, std::cout, std::cerr);
}
