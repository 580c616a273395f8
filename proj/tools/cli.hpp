/*
 * Copyright 2026 The okgd Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef OKGD_TOOLS_CLI_HPP_
#define OKGD_TOOLS_CLI_HPP_

#include <iosfwd>

namespace okgd::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,   // bad arguments, unreadable or invalid config
  kCheckFailed = 2,  // a verification check reported failures
};

// Subcommands: run, sweep, verify, fit-rate, check-schedule.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace okgd::cli

#endif  // OKGD_TOOLS_CLI_HPP_
