// Copyright 2026 The dcbpv Authors
//
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

// Command-line entry points: check, run, trace, translate, model-check.

#ifndef DCBPV_CLI_HPP
#define DCBPV_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "dcbpv/parser.hpp"

namespace dcbpv {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitTypeError = 1, kExitFuel = 2, kExitErrorHalt = 3, kExitUsage = 4 };

struct CliStreams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool color = false;
};

/// Runs the tool on argv (argv[0] is the program name) and returns the exit
/// code. Nothing is written to the process's own streams.
int run_cli(const std::vector<std::string>& argv, CliStreams io);

/// True unless DCBPV_COLOR=0; callers also check that the output is a tty.
bool color_from_env();

}  // namespace dcbpv

#endif  // DCBPV_CLI_HPP
