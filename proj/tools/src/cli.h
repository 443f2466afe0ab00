// Copyright 2026 The DRIP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: `drip <subcommand> [options]`.

#ifndef DRIP_TOOLS_CLI_H_
#define DRIP_TOOLS_CLI_H_

#include <ostream>

namespace drip {

// Parses argv, runs the subcommand and returns the process exit status.
// Reports go to `out`, diagnostics to `err`.
int CliDispatch(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err);

}  // namespace drip

#endif  // DRIP_TOOLS_CLI_H_
