#pragma once

#include <string>
#include <vector>

namespace starhardy::cli {

// Runs one driver invocation (verify | field-check | maximizer | sharpness |
// counterexample | suite) and returns the process exit status:
//   0  success
//   1  usage, config, or hypothesis error (nothing was computed)
//   2  the computation ran but a checked quantity missed its tolerance
int run(int argc, char** argv);

// Same, for callers that hold the arguments (without the program name) as a
// vector; used by the test suite.
int run(const std::vector<std::string>& args);

}  // namespace starhardy::cli
