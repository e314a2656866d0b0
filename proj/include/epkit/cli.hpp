#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace epkit::cli {

enum ExitCode : int {
  kOk = 0,
  kParseFailure = 2,
  kPreconditionViolation = 3,
  kNumericalFailure = 4,
};

struct CliConfig {
  std::string command;
  std::string input;
  std::string a;
  std::string b;
  std::string k;
  std::string mode = "generic";
  double eps_min = 1e-12;
  double eps_max = 1e-2;
  int points = 41;
  int trials = 8;
  std::uint64_t seed = 42;
  double tol = 0.0;  // 0: per-command default
  std::string out;
  double fit_min = 1e-8;
  double fit_max = 1e-3;
  unsigned threads = 1;
};

/// Runs one already-parsed command; returns the process exit status.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and dispatches to run().
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace epkit::cli
