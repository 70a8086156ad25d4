#include <iostream>

#include <spdlog/spdlog.h>

#include "commands.hpp"

int main(int argc, char** argv) {
  spdlog::set_level(spdlog::level::warn);
  return lot::cli::run_cli(argc, argv, std::cout, std::cerr);
}
