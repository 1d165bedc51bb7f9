#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qpurify/io.hpp"

namespace qpurify::cli {

// Process exit codes.
enum ExitStatus : int {
  kPurifiable = 0,     // also: feasible search, successful analysis
  kNotPurifiable = 1,  // well-formed input, negative answer
  kInvalidInput = 2,
  kInternalFailure = 3,
};

struct StateSpec {
  ParsedState parsed;
  std::string source;
};

// Reads and validates a state file; throws Error(ParseError) if unreadable.
StateSpec load_state(const std::string& path, double tol);

// Throws InvalidParameters unless every tolerance is positive and finite.
void check_tolerances(const Tolerances& tols);

int cmd_analyze(const std::string& path, const Tolerances& tols, bool json, std::ostream& out);
int cmd_pair(const std::string& path_a, const std::string& path_b, const Tolerances& tols, bool json,
             std::ostream& out);
int cmd_search(const std::string& path_a, const std::string& path_b, const SearchConfig& cfg,
               const Tolerances& tols, bool json, std::ostream& out);

// Parses argv (argv[0] is the program name) and dispatches; never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpurify::cli
