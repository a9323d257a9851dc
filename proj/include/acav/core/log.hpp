// Copyright 2026 The ACAV Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sstream>
#include <string>

namespace acav::log {

enum class Level { quiet = 0, info = 1, debug = 2 };

/// Reads ACAV_LOG (quiet|info|debug) once; defaults to info.
Level level();
void set_level(Level level);
void write(Level level, const std::string& message);

template <typename... Args>
void info(const Args&... args) {
  if (level() < Level::info) return;
  std::ostringstream os;
  (os << ... << args);
  write(Level::info, os.str());
}

template <typename... Args>
void debug(const Args&... args) {
  if (level() < Level::debug) return;
  std::ostringstream os;
  (os << ... << args);
  write(Level::debug, os.str());
}

}  // namespace acav::log
