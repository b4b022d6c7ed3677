// Copyright 2026 The rbargain Authors. All rights reserved.
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


// Command-line front end.

#ifndef RBARGAIN_CLI_HPP_
#define RBARGAIN_CLI_HPP_

#include <ostream>

namespace rbargain {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitFailedCheck = 3;

// Parses argv, runs one subcommand and returns the exit status. Artifacts go
// to --out when given and to `out` otherwise; the one-line summary goes to
// `out` after a file artifact and to `err` otherwise.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rbargain

#endif  // RBARGAIN_CLI_HPP_
