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

#include "svs/subprocess.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

extern char** environ;

namespace svs {
namespace {

int wait_with_timeout(pid_t pid, double timeout_sec, bool* timed_out) {
  using clock = std::chrono::steady_clock;
  const auto deadline =
      clock::now() + std::chrono::duration_cast<clock::duration>(
                         std::chrono::duration<double>(timeout_sec));
  *timed_out = false;
  for (;;) {
    int status = 0;
    const pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      if (WIFEXITED(status)) return WEXITSTATUS(status);
      if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
      return 1;
    }
    if (r < 0) return 1;
    if (clock::now() >= deadline) {
      *timed_out = true;
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      return 1;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv,
                          double timeout_sec) {
  if (argv.empty()) throw std::invalid_argument("empty command");

  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& s : argv) cargv.push_back(const_cast<char*>(s.c_str()));
  cargv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null",
                                   O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null",
                                   O_WRONLY, 0);

  pid_t pid = 0;
  const int rc =
      posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);

  CommandResult result;
  if (rc != 0) {
    result.exit_code = rc == ENOENT ? 127 : 126;
    return result;
  }
  result.exit_code = wait_with_timeout(pid, timeout_sec, &result.timed_out);
  return result;
}

bool executable_exists(const std::string& name) {
  namespace fs = std::filesystem;
  if (name.empty()) return false;
  if (name.find('/') != std::string::npos) {
    std::error_code ec;
    return fs::is_regular_file(name, ec) && access(name.c_str(), X_OK) == 0;
  }
  const char* path_env = std::getenv("PATH");
  if (!path_env) return false;
  std::istringstream dirs(path_env);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    const fs::path candidate = fs::path(dir) / name;
    std::error_code ec;
    if (fs::is_regular_file(candidate, ec) &&
        access(candidate.c_str(), X_OK) == 0)
      return true;
  }
  return false;
}

std::vector<std::string> split_command(const std::string& command) {
  std::istringstream in(command);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

std::string substitute_placeholder(std::string token, const std::string& key,
                                   const std::string& value) {
  const std::string pattern = "{" + key + "}";
  std::size_t pos = 0;
  while ((pos = token.find(pattern, pos)) != std::string::npos) {
    token.replace(pos, pattern.size(), value);
    pos += value.size();
  }
  return token;
}

}  // namespace svs
