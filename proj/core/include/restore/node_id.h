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

#ifndef RESTORE_NODE_ID_H_
#define RESTORE_NODE_ID_H_

#include <string_view>

namespace restore {

// Natural ordering of node identifiers: ids that are both non-negative
// integers compare numerically ("9" < "10"), everything else compares
// lexicographically, and numeric ids sort before non-numeric ones.
bool NodeIdLess(std::string_view a, std::string_view b);

}  // namespace restore

#endif  // RESTORE_NODE_ID_H_
