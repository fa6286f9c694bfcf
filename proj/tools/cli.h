// Copyright 2026 The Restore Authors
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

#ifndef RESTORE_TOOLS_CLI_H_
#define RESTORE_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace restore::cli {

enum ExitCode {
  kExitOk = 0,
  kExitInputError = 1,
  kExitInfeasible = 2,
  kExitLimit = 3,
  kExitVerificationFailed = 4,
};

// Runs the restore command line (`args[0]` is the program name) with
// output sent to `out` and diagnostics to `err`. Returns the exit code.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace restore::cli

#endif  // RESTORE_TOOLS_CLI_H_
