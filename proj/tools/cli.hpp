// Copyright 2026 The rsbeam Authors
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

#ifndef RSBEAM_TOOLS_CLI_HPP_
#define RSBEAM_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace rsbeam::cli {

// Exit codes of the rsbeam command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Parses "2pi/9", "pi", "-pi/4", "3*pi/9" or a plain number of radians.
// Throws std::invalid_argument on anything else.
double ParseAngle(const std::string& text);

// Entry point behind main(). args[0] is the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace rsbeam::cli

#endif  // RSBEAM_TOOLS_CLI_HPP_
