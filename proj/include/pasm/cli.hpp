// Copyright 2026 The PASM Authors
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

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pasm::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitUsage = 3;

// Runs the command line `pasm <args...>` (args excludes the program name)
// writing to the given streams instead of the process's.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pasm::cli
