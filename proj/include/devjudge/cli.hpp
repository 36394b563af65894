#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace devjudge::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainError = 1,
  kConfigError = 2,
  kBackendFailure = 3,
};

/// Entry point shared by the devjudge binary and the CLI tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace devjudge::cli
