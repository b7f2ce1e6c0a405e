#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nounforge::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kInternalError = 2,
};

// Entry point of the `nounforge` tool. args excludes the program name.
// Subcommands: train, analyze, eval, inspect.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

// Path of the thesaurus copy written next to a model file.
std::string thesaurus_sidecar(const std::string& model_path);

}  // namespace nounforge::cli
