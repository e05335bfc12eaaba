// Copyright 2026 The bilevel Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BILEVEL_TOOLS_CLI_HPP_
#define BILEVEL_TOOLS_CLI_HPP_

#include <ostream>

namespace bilevel::cli {

enum ExitCode {
  kOk = 0,
  kInfeasible = 1,
  kValidation = 2,
  kResource = 3,
  kInvariant = 4,
};

// Entry point of the bilevel command-line tool; returns the exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bilevel::cli

#endif  // BILEVEL_TOOLS_CLI_HPP_
