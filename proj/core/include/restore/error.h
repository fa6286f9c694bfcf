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

#ifndef RESTORE_ERROR_H_
#define RESTORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace restore {

// Malformed or invariant-violating input (feeder/scenario/plan/solution
// files, bad references).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The model could not be assembled from otherwise valid inputs.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver result violates an invariant it should have guaranteed
// (fractional binaries, non-radial restored network, ...).
class SolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace restore

#endif  // RESTORE_ERROR_H_
