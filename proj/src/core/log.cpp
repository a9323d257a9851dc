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

#include "acav/core/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <string_view>

namespace acav::log {
namespace {

Level from_env() {
  const char* env = std::getenv("ACAV_LOG");
  if (env == nullptr) return Level::info;
  const std::string_view v(env);
  if (v == "quiet" || v == "0") return Level::quiet;
  if (v == "debug" || v == "2") return Level::debug;
  return Level::info;
}

std::atomic<int>& current() {
  static std::atomic<int> lvl{static_cast<int>(from_env())};
  return lvl;
}

}  // namespace

Level level() { return static_cast<Level>(current().load(std::memory_order_relaxed)); }

void set_level(Level lvl) { current().store(static_cast<int>(lvl)); }

void write(Level lvl, const std::string& message) {
  std::cerr << (lvl == Level::debug ? "[acav:debug] " : "[acav] ") << message << '\n';
}

}  // namespace acav::log
