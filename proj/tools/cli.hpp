// SPDX-License-Identifier: Apache-2.0

#ifndef TWOWEIGHT_TOOLS_CLI_HPP
#define TWOWEIGHT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace twoweight::cli
{

enum ExitCode : int
{
  kSuccess = 0,
  kCheckFailure = 1,
  kInvalid = 2
};

// args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace twoweight::cli

#endif  // TWOWEIGHT_TOOLS_CLI_HPP
