// Copyright 2026 The Receipt Linker Authors.
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

// rlink subcommands. Each returns a process exit code: 0 on success, 1 on
// I/O or data errors, 2 on usage errors.

#ifndef RLINK_TOOLS_COMMANDS_H_
#define RLINK_TOOLS_COMMANDS_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "rlink/eval.h"

namespace rlink::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct Options {
  std::optional<std::string> input;  // bundled fixture when unset
  std::string strategy = "all";
  std::string format = "table";
  std::optional<std::string> output;
  std::optional<std::string> json_path;
  std::optional<std::string> tsv_path;
  std::string mention;
  std::size_t top = 5;
  LinkerConfig config;
};

// The synthetic corpus compiled into the binary.
std::string_view BundledFixture();

int RunMinePhrases(const Options &options, std::ostream &out,
                   std::ostream &err);
int RunIndex(const Options &options, std::ostream &out, std::ostream &err);
int RunLink(const Options &options, std::ostream &out, std::ostream &err);
int RunEval(const Options &options, std::ostream &out, std::ostream &err);

// Full command line, as main() receives it.
int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err);

}  // namespace rlink::cli

#endif  // RLINK_TOOLS_COMMANDS_H_
