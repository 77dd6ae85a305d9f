#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace balance_nets::cli {

  // Exit codes of the command-line tool.
  inline constexpr int exit_ok    = 0;
  inline constexpr int exit_error = 1;  // {"error": {...}} printed to `err`
  inline constexpr int exit_usage = 2;

  // Runs the balance-nets command line; `args` excludes the program name.
  // Reports go to `out` (or the --out file), errors to `err` as JSON.
  int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace balance_nets::cli
