#pragma once

#include <string>
#include <vector>

#include "thermo/model.hpp"

namespace thermo {

// Outcome of one command-line invocation, captured instead of printed so the
// dispatch layer is testable in-process. exit_code follows the tool's
// contract: 0 = computed, 1 = indeterminate result, 2 = input error.
struct CliResult {
  int exit_code = 2;
  std::string out;
  std::string err;
};

// Runs one invocation; args excludes the program name.
CliResult run_cli(const std::vector<std::string>& args);

// Parses a flow specification from JSON text. Expected shape:
//   { "model": "renewal" | "full" | "finite",
//     "matrix": [[0,1],...],              // finite only
//     "roof": { "c": ["0","1","2","0"], "s": [4,4,0],
//               "overrides": {"0": 0.693}, "n_min": 0, "lin": "0" },
//     "potential": { ... same shape ... },  // optional, default zero
//     "cusp_value": 0.0 | null,
//     "hint": { "t0": "0", "s0": "1" } }    // optional
// Coefficients c[1..3] and lin must be exact (rational strings or
// integers); c[0], s, overrides are read as doubles. Throws DomainError on
// malformed input.
FlowSpec spec_from_json(const std::string& text);

// Prints run_cli's streams and returns its exit code.
int cli_main(int argc, char** argv);

}  // namespace thermo
