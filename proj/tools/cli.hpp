#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace toda_kdq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;  // empty: standard output
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<int> k_max;
  std::optional<int> quad_degree;
  std::optional<double> tol;
};

// Parses argv into a RunConfig and runs it.  Errors are reported on `err`
// and mapped to the exit codes above.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

// Runs one command; throws toda_kdq::Error subclasses on failure.
int run(const RunConfig& cfg, std::ostream& out);

// The invariant suite over the fixtures in `dir`.  Writes a pass/fail table
// and returns kExitOk only if every check passes.
int verify_all(const std::string& dir, std::ostream& out);

}  // namespace toda_kdq::cli
