// Copyright 2026 The Privacy Watchdog Authors
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

#ifndef WATCHDOG_TOOLS_CLI_H_
#define WATCHDOG_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "watchdog/distributions.h"
#include "watchdog/relaxation.h"

namespace watchdog::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInfeasible = 4;
inline constexpr int kExitInternal = 5;

// Runs one invocation. `args` excludes the program name. Results go to `out`
// (or the files named by the flags); failures are reported on `err` as a
// one-line JSON object {"error": <category>, "message": ...}.
int Run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

// Rounds to the 12 significant digits used for all printed numbers; infinite
// values become the strings "inf" / "-inf".
nlohmann::json Number(double value);

// Structured form of a report, with partitions given as label lists.
nlohmann::json ReportToJson(const JointDistribution& joint,
                            const PrivacyReport& report);

}  // namespace watchdog::cli

#endif  // WATCHDOG_TOOLS_CLI_H_
