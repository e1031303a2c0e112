#include <csignal>
#include <iostream>

#include "cli.hpp"
#include "wief/census.hpp"

namespace {

extern "C" void on_signal(int) { wief::request_census_stop(); }

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::vector<std::string> args(argv + 1, argv + argc);
  return wief::cli::dispatch(args, std::cout, std::cerr, wief::cli::process_env());
}
