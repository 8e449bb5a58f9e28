// Copyright (c) the svs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVS_SUBPROCESS_HPP_
#define SVS_SUBPROCESS_HPP_

#include <string>
#include <vector>

namespace svs {

struct CommandResult {
  int exit_code = -1;
  bool timed_out = false;

  bool ok() const { return exit_code == 0 && !timed_out; }
};

// Runs argv directly (no shell), with stdout/stderr discarded. The child is
// killed once timeout_sec elapses. argv[0] resolves through PATH.
CommandResult run_command(const std::vector<std::string>& argv,
                          double timeout_sec);

// True when `name` is an executable path or resolves through PATH.
bool executable_exists(const std::string& name);

// Whitespace-split a command template into argv tokens.
std::vector<std::string> split_command(const std::string& command);

// Replaces every {key} occurrence in `token` by its value.
std::string substitute_placeholder(std::string token, const std::string& key,
                                   const std::string& value);

}  // namespace svs

#endif  // SVS_SUBPROCESS_HPP_
