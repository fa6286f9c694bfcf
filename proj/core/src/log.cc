// Copyright 2026 The Restore Authors
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

#include "restore/log.h"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <string>

namespace restore {
namespace {

LogLevel FromEnvironment() {
  const char* value = std::getenv("RESTORE_LOG");
  if (value == nullptr) return LogLevel::kWarning;
  const std::string level = value;
  if (level == "error") return LogLevel::kError;
  if (level == "info") return LogLevel::kInfo;
  if (level == "debug") return LogLevel::kDebug;
  return LogLevel::kWarning;
}

std::atomic<int>& Threshold() {
  static std::atomic<int> threshold{static_cast<int>(FromEnvironment())};
  return threshold;
}

const char* Tag(LogLevel level) {
  switch (level) {
    case LogLevel::kError:
      return "error";
    case LogLevel::kWarning:
      return "warning";
    case LogLevel::kInfo:
      return "info";
    case LogLevel::kDebug:
      return "debug";
  }
  return "log";
}

}  // namespace

LogLevel CurrentLogLevel() { return static_cast<LogLevel>(Threshold().load()); }

void SetLogLevel(LogLevel level) { Threshold().store(static_cast<int>(level)); }

void Log(LogLevel level, std::string_view message) {
  if (static_cast<int>(level) > Threshold().load()) return;
  std::cerr << "restore: " << Tag(level) << ": " << message << '\n';
}

}  // namespace restore
